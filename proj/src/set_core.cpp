#include "mdset/set_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace mdset {

bool DigitSet::allows(int digit) const {
    return std::binary_search(digits.begin(), digits.end(), digit);
}

void DigitSet::validate() const {
    if (base < 3) throw invalid_argument_error("digit set: base must be >= 3");
    const int n = count();
    if (n < 2) throw invalid_argument_error("digit set: need at least 2 digits");
    if (n > base - 1)
        throw invalid_argument_error("digit set: must be a proper subset (at most base-1 digits)");
    for (int i = 0; i < n; ++i) {
        if (digits[i] < 0 || digits[i] >= base)
            throw invalid_argument_error("digit set: digit out of range");
        if (i > 0 && digits[i] <= digits[i - 1])
            throw invalid_argument_error("digit set: digits must be strictly increasing");
    }
}

std::uint64_t ProductSet::branch_count() const {
    std::uint64_t n = 1;
    for (const auto& c : coords) {
        n *= static_cast<std::uint64_t>(c.count()); // d and |J_i| are tiny; no overflow
    }
    return n;
}

std::vector<int> ProductSet::symbol_digits(std::uint64_t symbol) const {
    const int d = dim();
    std::vector<int> out(d);
    for (int i = d - 1; i >= 0; --i) {
        const auto ni = static_cast<std::uint64_t>(coords[i].count());
        out[i] = coords[i].digits[static_cast<std::size_t>(symbol % ni)];
        symbol /= ni;
    }
    return out;
}

void ProductSet::validate() const {
    if (coords.empty()) throw invalid_argument_error("product set: need at least one coordinate");
    for (const auto& c : coords) {
        c.validate();
        if (c.base != base)
            throw invalid_argument_error("product set: all coordinates must share the base");
    }
}

Rational coord_value(const CoordDigits& cd, int base) {
    const auto L = static_cast<unsigned>(cd.prefix.size());
    const auto P = static_cast<unsigned>(cd.period.size());
    BigInt pre = 0;
    for (int d : cd.prefix) pre = pre * base + d;
    BigInt per = 0;
    for (int d : cd.period) per = per * base + d;
    // 0.prefix(period)^inf = (pre + per/(b^P - 1)) / b^L
    Rational tail(per, ipow(base, P) - 1);
    return (Rational(pre) + tail) / Rational(ipow(base, L));
}

CoordDigits expand_value(const Rational& x, int base) {
    if (x < 0 || x >= 1) throw invalid_argument_error("expand_value: need x in [0,1)");
    BigInt r = num(x);
    const BigInt q = den(x);
    std::vector<int> digits;
    std::map<BigInt, std::size_t> seen;
    for (std::uint64_t it = 0; it <= kExpandGuard; ++it) {
        auto [pos, fresh] = seen.emplace(r, digits.size());
        if (!fresh) {
            const std::size_t start = pos->second;
            CoordDigits out;
            out.prefix.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(start));
            out.period.assign(digits.begin() + static_cast<std::ptrdiff_t>(start), digits.end());
            return out;
        }
        r *= base;
        const BigInt d = r / q;
        r -= d * q;
        digits.push_back(d.convert_to<int>());
    }
    throw guard_error("expand_value: period longer than the iteration guard");
}

CoordDigits alphabet_expand(const DigitSet& ds, const Rational& x) {
    ds.validate();
    const Rational lo(ds.min_digit(), ds.base - 1);
    const Rational hi(ds.max_digit(), ds.base - 1);
    if (x < lo || x > hi)
        throw invalid_argument_error("alphabet_expand: value outside the attractor hull");
    Rational y = x;
    std::vector<int> digits;
    std::map<Rational, std::size_t> seen;
    for (std::uint64_t it = 0; it <= kExpandGuard; ++it) {
        auto [pos, fresh] = seen.emplace(y, digits.size());
        if (!fresh) {
            const std::size_t start = pos->second;
            CoordDigits out;
            out.prefix.assign(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(start));
            out.period.assign(digits.begin() + static_cast<std::ptrdiff_t>(start), digits.end());
            return out;
        }
        bool found = false;
        for (auto dg = ds.digits.rbegin(); dg != ds.digits.rend(); ++dg) {
            const Rational next = y * ds.base - *dg;
            if (next >= lo && next <= hi) {
                digits.push_back(*dg);
                y = next;
                found = true;
                break;
            }
        }
        if (!found) throw invalid_argument_error("alphabet_expand: value falls in a gap of the set");
    }
    throw guard_error("alphabet_expand: period longer than the iteration guard");
}

PointDigits min_fixed_point(const ProductSet& ps) {
    PointDigits x;
    x.coords.reserve(static_cast<std::size_t>(ps.dim()));
    for (const auto& c : ps.coords) x.coords.push_back({{}, {c.min_digit()}});
    return x;
}

std::vector<Rational> point_value(const ProductSet& ps, const PointDigits& x) {
    validate_point(ps, x);
    std::vector<Rational> v;
    v.reserve(x.coords.size());
    for (std::size_t i = 0; i < x.coords.size(); ++i)
        v.push_back(coord_value(x.coords[i], ps.base));
    return v;
}

void validate_point(const ProductSet& ps, const PointDigits& x) {
    if (static_cast<int>(x.coords.size()) != ps.dim())
        throw invalid_argument_error("point: coordinate count mismatch");
    for (std::size_t i = 0; i < x.coords.size(); ++i) {
        const auto& cd = x.coords[i];
        if (cd.period.empty())
            throw invalid_argument_error("point: period must be nonempty");
        const auto& ds = ps.coords[i];
        for (int d : cd.prefix)
            if (!ds.allows(d)) throw invalid_argument_error("point: prefix digit not in alphabet");
        for (int d : cd.period)
            if (!ds.allows(d)) throw invalid_argument_error("point: period digit not in alphabet");
    }
}

double dim_coordinate(const DigitSet& ds) {
    return std::log(static_cast<double>(ds.count())) / std::log(static_cast<double>(ds.base));
}

double dim_product(const ProductSet& ps) {
    double s = 0;
    for (const auto& c : ps.coords) s += dim_coordinate(c);
    return s;
}

Rational diam_coordinate(const DigitSet& ds) {
    return Rational(ds.max_digit() - ds.min_digit(), ds.base - 1);
}

Rational diam_product(const ProductSet& ps) {
    Rational m = 0;
    for (const auto& c : ps.coords) m = std::max(m, diam_coordinate(c));
    return m;
}

PointDigits apply_word(const ProductSet& ps, const Word& w, const PointDigits& x) {
    validate_point(ps, x);
    PointDigits y = x;
    const int d = ps.dim();
    std::vector<std::vector<int>> pre(static_cast<std::size_t>(d));
    for (std::uint64_t s : w) {
        if (s >= ps.branch_count()) throw invalid_argument_error("word: symbol out of range");
        const auto digs = ps.symbol_digits(s);
        for (int i = 0; i < d; ++i) pre[static_cast<std::size_t>(i)].push_back(digs[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < d; ++i) {
        auto& c = y.coords[static_cast<std::size_t>(i)];
        c.prefix.insert(c.prefix.begin(), pre[static_cast<std::size_t>(i)].begin(), pre[static_cast<std::size_t>(i)].end());
    }
    return y;
}

Box cylinder_box(const ProductSet& ps, const Word& w) {
    ps.validate();
    const int d = ps.dim();
    const auto n = static_cast<unsigned>(w.size());
    const BigInt bn = ipow(ps.base, n);
    std::vector<BigInt> P(static_cast<std::size_t>(d), 0);
    for (std::uint64_t s : w) {
        if (s >= ps.branch_count()) throw invalid_argument_error("word: symbol out of range");
        const auto digs = ps.symbol_digits(s);
        for (int i = 0; i < d; ++i)
            P[static_cast<std::size_t>(i)] = P[static_cast<std::size_t>(i)] * ps.base + digs[static_cast<std::size_t>(i)];
    }
    Box box;
    box.lo.reserve(static_cast<std::size_t>(d));
    box.hi.reserve(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto& c = ps.coords[static_cast<std::size_t>(i)];
        const auto& p = P[static_cast<std::size_t>(i)];
        box.lo.push_back((Rational(p) + Rational(c.min_digit(), ps.base - 1)) / Rational(bn));
        box.hi.push_back((Rational(p) + Rational(c.max_digit(), ps.base - 1)) / Rational(bn));
    }
    return box;
}

namespace {

// If x = k / b^L for integers, return minimal such L.
std::optional<unsigned> badic_level(const Rational& x, int base) {
    BigInt d = den(x);
    unsigned L = 0;
    while (d > 1) {
        const BigInt g = boost::multiprecision::gcd(d, BigInt(base));
        if (g == 1) return std::nullopt;
        d /= g;
        ++L;
    }
    return L;
}

} // namespace

bool contains_value(const DigitSet& ds, const Rational& x) {
    ds.validate();
    if (x < 0 || x > 1) return false;
    if (x == 1) return ds.allows(ds.base - 1); // 1 = 0.(b-1)^inf only
    const auto in_alphabet = [&](const std::vector<int>& v) {
        return std::all_of(v.begin(), v.end(), [&](int d) { return ds.allows(d); });
    };
    const CoordDigits greedy = expand_value(x, ds.base);
    if (in_alphabet(greedy.prefix) && in_alphabet(greedy.period)) return true;
    // A terminating expansion also has the low-tail form 0.d1..dk'(b-1)^inf.
    if (x > 0) {
        if (const auto L = badic_level(x, ds.base)) {
            if (!ds.allows(ds.base - 1)) return false;
            BigInt t = num(x) * (ipow(ds.base, *L) / den(x)) - 1;
            std::vector<int> digs(*L);
            for (unsigned i = 0; i < *L; ++i) {
                digs[*L - 1 - i] = (t % ds.base).convert_to<int>();
                t /= ds.base;
            }
            return in_alphabet(digs);
        }
    }
    return false;
}

bool contains_point(const ProductSet& ps, const std::vector<Rational>& x) {
    ps.validate();
    if (static_cast<int>(x.size()) != ps.dim())
        throw invalid_argument_error("contains_point: coordinate count mismatch");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!contains_value(ps.coords[i], x[i])) return false;
    return true;
}

bool operator==(const LatticePoint& a, const LatticePoint& b) {
    return a.den_pow == b.den_pow && a.num == b.num;
}

bool operator<(const LatticePoint& a, const LatticePoint& b) {
    return std::lexicographical_compare(a.num.begin(), a.num.end(), b.num.begin(), b.num.end());
}

std::uint64_t checked_word_count(const ProductSet& ps, unsigned n) {
    const std::uint64_t N = ps.branch_count();
    std::uint64_t total = 1;
    for (unsigned i = 0; i < n; ++i) {
        if (total > kEnumGuard / N)
            throw guard_error("enumeration guard: too many words at this level");
        total *= N;
    }
    if (total > kEnumGuard) throw guard_error("enumeration guard: too many words at this level");
    return total;
}

std::vector<LatticePoint> lattice_orbit_points(const ProductSet& ps, unsigned n) {
    ps.validate();
    const int d = ps.dim();
    for (int i = 0; i < d; ++i) {
        const auto& c = ps.coords[static_cast<std::size_t>(i)];
        if (!c.allows(0) || !c.allows(ps.base - 1))
            throw invalid_argument_error(
                "lattice orbit points: coordinate " + std::to_string(i + 1) +
                " must allow digits 0 and base-1");
    }
    const std::uint64_t total = checked_word_count(ps, n);
    const std::uint64_t N = ps.branch_count();

    // Precompute digit tuples once.
    std::vector<std::vector<int>> digs(N);
    for (std::uint64_t s = 0; s < N; ++s) digs[s] = ps.symbol_digits(s);

    std::vector<LatticePoint> out;
    out.reserve(total << d);
    std::vector<std::uint64_t> word(n, 0);
    std::vector<BigInt> P(static_cast<std::size_t>(d));
    const std::uint64_t corners = std::uint64_t{1} << d;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (unsigned pos = n; pos-- > 0;) {
            word[pos] = rem % N;
            rem /= N;
        }
        std::fill(P.begin(), P.end(), BigInt(0));
        for (unsigned pos = 0; pos < n; ++pos)
            for (int i = 0; i < d; ++i)
                P[static_cast<std::size_t>(i)] = P[static_cast<std::size_t>(i)] * ps.base +
                                                 digs[word[pos]][static_cast<std::size_t>(i)];
        for (std::uint64_t corner = 0; corner < corners; ++corner) {
            LatticePoint p;
            p.den_pow = n;
            p.num.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i)
                p.num[static_cast<std::size_t>(i)] =
                    P[static_cast<std::size_t>(i)] + ((corner >> i) & 1u);
            out.push_back(std::move(p));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace mdset
