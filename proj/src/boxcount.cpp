#include "mdset/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

#include "mdset/dim_formulas.hpp"
#include "mdset/error.hpp"

namespace mdset {

namespace {

BigInt floor_r(const Rational& r) {
    const BigInt n = num(r), d = den(r);
    BigInt q = n / d;
    if (n < 0 && q * d != n) --q;
    return q;
}

BigInt ceil_r(const Rational& r) { return -floor_r(-r); }

// Exact half-side psi(b^n)^(1+t_j), snapped to an exact b-power when the
// exponent is one, otherwise rounded up (outward) to denominator b^(m+2).
Rational half_side(const PsiSpec& psi, int base, double tj, unsigned n, unsigned m) {
    if (n == 0) {
        if (psi.family != PsiSpec::Family::power)
            throw invalid_argument_error("generation 0 needs psi(1) = 1, a pure power law");
        return Rational(1);
    }
    const double lp = log_psi(psi, base, static_cast<int>(n));
    if (!(lp < 0)) throw invalid_argument_error("psi(b^n) must be < 1 to shape rectangles");
    const double e_real = -(1.0 + tj) * lp / std::log(static_cast<double>(base));
    const double e_snap = std::round(e_real);
    if (std::abs(e_real - e_snap) < 1e-9 && e_snap >= 0 && e_snap <= 4096)
        return Rational(1, ipow(BigInt(base), static_cast<unsigned>(e_snap)));
    const BigInt dn = ipow(BigInt(base), m + 2);
    const double scaled = std::exp((1.0 + tj) * lp) * dn.convert_to<double>();
    BigInt numer(std::ceil(scaled));
    if (numer < 1) numer = 1;
    return Rational(numer, dn);
}

// All level-m cell indices P whose digit string stays in the alphabet and
// whose closed cube [P, P+1]/b^m meets the closed interval [lo, hi].
std::vector<std::uint64_t> feasible_cells(const DigitSet& ds, const Rational& lo,
                                          const Rational& hi, unsigned m, const BigInt& grid) {
    BigInt p_lo = ceil_r(lo * grid) - 1;
    BigInt p_hi = floor_r(hi * grid);
    if (p_lo < 0) p_lo = 0;
    if (p_hi > grid - 1) p_hi = grid - 1;
    std::vector<std::uint64_t> out;
    if (p_lo > p_hi) return out;
    const auto plo = p_lo.convert_to<std::uint64_t>();
    const auto phi = p_hi.convert_to<std::uint64_t>();
    std::vector<int> lo_dig(m), hi_dig(m);
    std::uint64_t a = plo, b = phi;
    for (unsigned pos = m; pos-- > 0;) {
        lo_dig[pos] = static_cast<int>(a % ds.base);
        hi_dig[pos] = static_cast<int>(b % ds.base);
        a /= ds.base;
        b /= ds.base;
    }
    struct Dfs {
        const DigitSet& ds;
        unsigned m;
        const std::vector<int>& lo_dig;
        const std::vector<int>& hi_dig;
        std::vector<std::uint64_t>& out;
        void run(unsigned pos, std::uint64_t val, bool tight_lo, bool tight_hi) {
            if (pos == m) {
                if (out.size() >= kCellGuard)
                    throw guard_error("grid cells per coordinate exceed the cell guard");
                out.push_back(val);
                return;
            }
            const int dmin = tight_lo ? lo_dig[pos] : 0;
            const int dmax = tight_hi ? hi_dig[pos] : ds.base - 1;
            for (int dg : ds.digits) {
                if (dg < dmin) continue;
                if (dg > dmax) break;
                run(pos + 1, val * ds.base + dg, tight_lo && dg == lo_dig[pos],
                    tight_hi && dg == hi_dig[pos]);
            }
        }
    };
    Dfs dfs{ds, m, lo_dig, hi_dig, out};
    dfs.run(0, 0, true, true);
    return out;
}

// Per-coordinate cell lists, one per coordinate word, plus the word radix.
struct CoordCells {
    std::vector<std::vector<std::uint64_t>> lists;
    std::uint64_t radix = 1;
};

template <class K>
void emit_rect(const std::vector<const std::vector<std::uint64_t>*>& lists, unsigned coord,
               unsigned bits, K partial, K* out, std::uint64_t& pos) {
    if (coord + 1 == lists.size()) {
        for (std::uint64_t cell : *lists[coord]) out[pos++] = (partial << bits) | K(cell);
        return;
    }
    for (std::uint64_t cell : *lists[coord])
        emit_rect(lists, coord + 1, bits, K((partial << bits) | K(cell)), out, pos);
}

template <class K>
BigInt count_distinct(const std::vector<CoordCells>& tabs, std::uint64_t rects, unsigned bits,
                      std::uint64_t total, int threads) {
    const unsigned d = static_cast<unsigned>(tabs.size());
    std::vector<K> keys(total);
    const std::uint64_t nt = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads),
                                                     std::max<std::uint64_t>(rects, 1));
    // chunk boundaries by rectangle index; per-chunk key offsets are exact,
    // so the layout (hence the sorted key set) is thread-count independent
    std::vector<std::uint64_t> begin_rect(nt + 1), begin_key(nt + 1);
    for (std::uint64_t c = 0; c <= nt; ++c) begin_rect[c] = rects * c / nt;
    std::vector<const std::vector<std::uint64_t>*> probe(d);
    std::uint64_t acc = 0, chunk = 0;
    for (std::uint64_t r = 0; r < rects; ++r) {
        while (begin_rect[chunk] == r) begin_key[chunk++] = acc;
        std::uint64_t rr = r, prod = 1;
        for (unsigned i = d; i-- > 0;) {
            prod *= tabs[i].lists[rr % tabs[i].radix].size();
            rr /= tabs[i].radix;
        }
        acc += prod;
    }
    while (chunk <= nt) begin_key[chunk++] = acc;
    auto fill = [&](std::uint64_t c) {
        std::vector<const std::vector<std::uint64_t>*> lists(d);
        std::uint64_t pos = begin_key[c];
        for (std::uint64_t r = begin_rect[c]; r < begin_rect[c + 1]; ++r) {
            std::uint64_t rr = r;
            for (unsigned i = d; i-- > 0;) {
                lists[i] = &tabs[i].lists[rr % tabs[i].radix];
                rr /= tabs[i].radix;
            }
            emit_rect<K>(lists, 0, bits, K(0), keys.data(), pos);
        }
    };
    if (nt == 1) {
        fill(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nt);
        for (std::uint64_t c = 0; c < nt; ++c) pool.emplace_back(fill, c);
        for (auto& th : pool) th.join();
    }
    std::sort(keys.begin(), keys.end());
    const auto distinct = std::unique(keys.begin(), keys.end()) - keys.begin();
    return BigInt(static_cast<std::uint64_t>(distinct));
}

BigInt count_union(const std::vector<CoordCells>& tabs, unsigned bits, int threads) {
    std::uint64_t rects = 1;
    BigInt total = 0;
    {
        // factorized total: sum over rectangles of per-rectangle products
        BigInt t = 1;
        for (const auto& tab : tabs) {
            BigInt s = 0;
            for (const auto& l : tab.lists) s += l.size();
            t *= s;
            rects *= tab.radix;
        }
        total = t;
    }
    if (total > kCellGuard) throw guard_error("grid cell enumeration exceeds the cell guard");
    if (total == 0) return BigInt(0);
    const auto total_u = total.convert_to<std::uint64_t>();
    const unsigned d = static_cast<unsigned>(tabs.size());
    if (bits * d <= 63)
        return count_distinct<std::uint64_t>(tabs, rects, bits, total_u, threads);
#if defined(__SIZEOF_INT128__)
    if (bits * d <= 126)
        return count_distinct<unsigned __int128>(tabs, rects, bits, total_u, threads);
#endif
    throw guard_error("grid keys do not fit 128 bits; lower m or the arity");
}

// Bits needed per coordinate cell index, i.e. for values in [0, b^m).
unsigned cell_bits(const BigInt& grid) {
    if (grid <= 1) return 1;
    const unsigned bits = boost::multiprecision::msb(grid - 1) + 1;
    if (bits > 62) throw guard_error("grid level too fine for 64-bit cell indices");
    return bits;
}

} // namespace

BigInt box_count_attractor(const ProductSet& ps, unsigned m) {
    ps.validate();
    checked_word_count(ps, m); // refuses N^m beyond the enumeration guard
    const BigInt grid = ipow(BigInt(ps.base), m);
    const unsigned bits = cell_bits(grid);
    std::vector<CoordCells> tabs(ps.coords.size());
    for (size_t i = 0; i < ps.coords.size(); ++i) {
        tabs[i].radix = 1;
        tabs[i].lists.push_back(feasible_cells(ps.coords[i], Rational(0), Rational(1), m, grid));
    }
    return count_union(tabs, bits, 1);
}

BigInt box_count_generation(const ProductSet& ps, const PointDigits& x, const PsiSpec& psi,
                            const std::vector<double>& t, unsigned n, unsigned m, int threads) {
    ps.validate();
    validate_point(ps, x);
    validate_weights(ps.dim(), t);
    psi.validate();
    if (threads < 1) throw invalid_argument_error("threads must be >= 1");
    checked_word_count(ps, n); // refuses N^n beyond the enumeration guard
    const BigInt grid = ipow(BigInt(ps.base), m);
    const unsigned bits = cell_bits(grid);
    const BigInt level = ipow(BigInt(ps.base), n);
    std::vector<CoordCells> tabs(ps.coords.size());
    for (size_t i = 0; i < ps.coords.size(); ++i) {
        const DigitSet& ds = ps.coords[i];
        const Rational half = half_side(psi, ps.base, t[i], n, m);
        const Rational xval = coord_value(x.coords[i], ps.base);
        std::uint64_t radix = 1;
        for (unsigned p = 0; p < n; ++p) radix *= ds.digits.size();
        tabs[i].radix = radix;
        tabs[i].lists.reserve(radix);
        for (std::uint64_t w = 0; w < radix; ++w) {
            BigInt word_val = 0;
            std::uint64_t ww = w;
            for (unsigned p = 0; p < n; ++p) { // least significant position first
                word_val += BigInt(ds.digits[ww % ds.digits.size()]) * ipow(BigInt(ds.base), p);
                ww /= ds.digits.size();
            }
            const Rational center = (Rational(word_val) + xval) / Rational(level);
            tabs[i].lists.push_back(feasible_cells(ds, center - half, center + half, m, grid));
        }
    }
    return count_union(tabs, bits, threads);
}

SlopeFit slope_fit(int base, const std::vector<std::pair<unsigned, BigInt>>& series) {
    if (base < 2) throw invalid_argument_error("slope_fit needs base >= 2");
    if (series.size() < 3) throw invalid_argument_error("slope_fit needs at least 3 points");
    const double lb = std::log(static_cast<double>(base));
    const auto sn = static_cast<double>(series.size());
    std::vector<double> xs, ys;
    xs.reserve(series.size());
    ys.reserve(series.size());
    for (const auto& [m, count] : series) {
        if (count <= 0) throw invalid_argument_error("box counts must be positive");
        xs.push_back(m * lb);
        ys.push_back(std::log(count.convert_to<double>()));
    }
    if (*std::max_element(ys.begin(), ys.end()) == *std::min_element(ys.begin(), ys.end()))
        throw invalid_argument_error("constant count series carries no slope");
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= sn;
    my /= sn;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) throw invalid_argument_error("scale levels must vary");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double sse = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - my - fit.slope * (xs[i] - mx);
        sse += r * r;
    }
    fit.std_error = std::sqrt(sse / (sn - 2.0) / sxx);
    return fit;
}

ProbeReport empirical_dimension_probe(const ProductSet& ps, const PointDigits& x,
                                      const PsiSpec& psi, const std::vector<double>& t,
                                      const std::vector<unsigned>& n_list, int threads,
                                      GridPolicy policy) {
    if (n_list.empty()) throw invalid_argument_error("need at least one generation");
    ps.validate();
    validate_point(ps, x);
    psi.validate();
    const DimBreakdown wd = weighted_dim(ps, t);
    ProbeReport rep;
    rep.reference = wd.value;
    rep.matched_coord = wd.argmin.front();
    const double lb = std::log(static_cast<double>(ps.base));
    for (unsigned n : n_list) {
        if (n < 1) throw invalid_argument_error("probe generations start at 1");
        const double lp = log_psi(psi, ps.base, static_cast<int>(n));
        if (!(lp < 0)) throw invalid_argument_error("psi(b^n) must be < 1 to match a grid");
        const double e_real = -(1.0 + t[rep.matched_coord]) * lp / lb;
        long mm = 0;
        switch (policy) {
        case GridPolicy::nearest: mm = std::llround(e_real); break;
        case GridPolicy::finer: mm = static_cast<long>(std::ceil(e_real - 1e-9)); break;
        case GridPolicy::coarser: mm = static_cast<long>(std::floor(e_real + 1e-9)); break;
        }
        if (mm < 1) mm = 1;
        ProbeRow row;
        row.n = n;
        row.m = static_cast<unsigned>(mm);
        row.count = box_count_generation(ps, x, psi, t, n, row.m, threads);
        row.exponent =
            row.count <= 0 ? 0.0 : std::log(row.count.convert_to<double>()) / (mm * lb);
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

} // namespace mdset
