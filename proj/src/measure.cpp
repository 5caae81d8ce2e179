#include "mdset/measure.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdset/rng.hpp"

namespace mdset {

Rational cylinder_mass(const ProductSet& ps, const Word& w) {
    ps.validate();
    const std::uint64_t N = ps.branch_count();
    for (std::uint64_t s : w)
        if (s >= N) throw invalid_argument_error("word: symbol out of range");
    return Rational(1, ipow(BigInt(N), static_cast<unsigned>(w.size())));
}

namespace {

enum class Placement { outside, inside, partial };

Placement classify_interval(const Rational& box_lo, const Rational& box_hi, const Rational& lo,
                            const Rational& hi) {
    if (box_hi < lo || box_lo > hi) return Placement::outside;
    if (box_lo >= lo && box_hi <= hi) return Placement::inside;
    return Placement::partial;
}

struct IntervalMassWalker {
    const DigitSet& ds;
    const Rational &lo, &hi;
    int depth;
    Rational diam; // width of the level-0 hull
    Rational lower = 0, upper = 0;

    // box for the current word: [box_lo, box_lo + diam * scale], scale = base^-level
    void walk(int level, const Rational& box_lo, const Rational& scale) {
        switch (classify_interval(box_lo, box_lo + diam * scale, lo, hi)) {
        case Placement::outside:
            return;
        case Placement::inside: {
            const Rational mass(1, ipow(BigInt(ds.count()), static_cast<unsigned>(level)));
            lower += mass;
            upper += mass;
            return;
        }
        case Placement::partial:
            break;
        }
        if (level == depth) {
            upper += Rational(1, ipow(BigInt(ds.count()), static_cast<unsigned>(level)));
            return;
        }
        const Rational child_scale = scale / ds.base;
        for (int d : ds.digits)
            walk(level + 1, box_lo + (d - ds.min_digit()) * child_scale, child_scale);
    }
};

} // namespace

MassInterval interval_mass(const DigitSet& ds, const Rational& lo, const Rational& hi, int depth) {
    ds.validate();
    if (depth < 0) throw invalid_argument_error("interval mass: depth must be >= 0");
    IntervalMassWalker w{ds, lo, hi, depth,
                         Rational(ds.max_digit() - ds.min_digit(), ds.base - 1)};
    w.walk(0, Rational(ds.min_digit(), ds.base - 1), Rational(1));
    return {w.lower, w.upper};
}

namespace {

struct BallMassWalker {
    const ProductSet& ps;
    const std::vector<Rational>& blo;
    const std::vector<Rational>& bhi;
    int depth;
    BigInt N;
    std::vector<Rational> diam; // per-coordinate level-0 hull widths
    Rational lower = 0, upper = 0;

    Placement classify(const std::vector<Rational>& lo, const Rational& scale) const {
        bool all_inside = true;
        for (std::size_t i = 0; i < lo.size(); ++i) {
            switch (classify_interval(lo[i], lo[i] + diam[i] * scale, blo[i], bhi[i])) {
            case Placement::outside:
                return Placement::outside;
            case Placement::partial:
                all_inside = false;
                break;
            case Placement::inside:
                break;
            }
        }
        return all_inside ? Placement::inside : Placement::partial;
    }

    void walk(int level, const std::vector<Rational>& lo, const Rational& scale) {
        switch (classify(lo, scale)) {
        case Placement::outside:
            return;
        case Placement::inside: {
            const Rational mass(1, ipow(N, static_cast<unsigned>(level)));
            lower += mass;
            upper += mass;
            return;
        }
        case Placement::partial:
            break;
        }
        if (level == depth) {
            upper += Rational(1, ipow(N, static_cast<unsigned>(level)));
            return;
        }
        const int d = ps.dim();
        const Rational child_scale = scale / ps.base;
        std::vector<Rational> clo(static_cast<std::size_t>(d));
        for (std::uint64_t s = 0; s < ps.branch_count(); ++s) {
            const auto digs = ps.symbol_digits(s);
            for (int i = 0; i < d; ++i) {
                const auto ui = static_cast<std::size_t>(i);
                clo[ui] = lo[ui] +
                          (digs[ui] - ps.coords[ui].min_digit()) * child_scale;
            }
            walk(level + 1, clo, child_scale);
        }
    }
};

} // namespace

MassInterval ball_mass(const ProductSet& ps, const std::vector<Rational>& center,
                       const Rational& radius, int depth, MeasureMode mode) {
    ps.validate();
    const int d = ps.dim();
    if (static_cast<int>(center.size()) != d)
        throw invalid_argument_error("ball mass: center arity mismatch");
    if (!(radius > 0)) throw invalid_argument_error("ball mass: radius must be positive");
    if (depth < 0) throw invalid_argument_error("ball mass: depth must be >= 0");

    if (mode == MeasureMode::product) {
        MassInterval out{1, 1};
        for (int i = 0; i < d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            const auto mi =
                interval_mass(ps.coords[ui], center[ui] - radius, center[ui] + radius, depth);
            out.lower *= mi.lower;
            out.upper *= mi.upper;
        }
        return out;
    }

    std::vector<Rational> blo(static_cast<std::size_t>(d)), bhi(static_cast<std::size_t>(d));
    std::vector<Rational> lo(static_cast<std::size_t>(d)), diam(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        blo[ui] = center[ui] - radius;
        bhi[ui] = center[ui] + radius;
        lo[ui] = Rational(ps.coords[ui].min_digit(), ps.base - 1);
        diam[ui] = Rational(ps.coords[ui].max_digit() - ps.coords[ui].min_digit(), ps.base - 1);
    }
    BallMassWalker w{ps, blo, bhi, depth, BigInt(ps.branch_count()), std::move(diam)};
    w.walk(0, lo, Rational(1));
    return {w.lower, w.upper};
}

AhlforsReport ahlfors_check(const ProductSet& ps, int samples, const Rational& r_min,
                            const Rational& r_max, std::uint64_t seed) {
    ps.validate();
    if (samples < 1) throw invalid_argument_error("ahlfors check: need at least one sample");
    if (!(r_min > 0) || r_max < r_min)
        throw invalid_argument_error("ahlfors check: need 0 < r_min <= r_max");

    const double gamma = dim_product(ps);
    const double log_rmin = std::log(to_double(r_min));
    const double log_rmax = std::log(to_double(r_max));
    // resolution: a few levels below the smallest radius
    const int d = ps.dim();
    const int base_level = static_cast<int>(std::ceil(-std::log(to_double(r_min)) /
                                                      std::log(static_cast<double>(ps.base))));

    Rng rng(seed);
    AhlforsReport rep;
    rep.samples = samples;
    double c1 = 0, c2 = 0;
    for (int s = 0; s < samples; ++s) {
        // random center: digit prefix below the resolution scale, minimal tail
        std::vector<Rational> center;
        center.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            const auto& ds = ps.coords[static_cast<std::size_t>(i)];
            CoordDigits cd;
            for (int k = 0; k < base_level + 2; ++k) {
                const auto pick = static_cast<std::size_t>(
                    uniform_int(rng, 0, ds.count() - 1));
                cd.prefix.push_back(ds.digits[pick]);
            }
            cd.period = {ds.min_digit()};
            center.push_back(coord_value(cd, ps.base));
        }
        // log-uniform radius, snapped to a dyadic rational
        const double rd = std::exp(uniform(rng, log_rmin, log_rmax));
        Rational r(BigInt(std::llround(std::ldexp(rd, 40))), ipow(2, 40));
        r = std::min(std::max(r, r_min), r_max);
        const int level = static_cast<int>(std::ceil(-std::log(to_double(r)) /
                                                     std::log(static_cast<double>(ps.base)))) + 2;
        const auto mi = ball_mass(ps, center, r, level, MeasureMode::product);
        const double mid = 0.5 * (to_double(mi.lower) + to_double(mi.upper));
        const double ratio = mid / std::pow(to_double(r), gamma);
        c1 = (s == 0) ? ratio : std::min(c1, ratio);
        c2 = (s == 0) ? ratio : std::max(c2, ratio);
    }
    rep.c1 = c1;
    rep.c2 = c2;
    return rep;
}

namespace {

std::vector<Word> all_words(const ProductSet& ps, unsigned n) {
    const std::uint64_t total = checked_word_count(ps, n);
    const std::uint64_t N = ps.branch_count();
    std::vector<Word> out;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Word w(n);
        std::uint64_t rem = idx;
        for (unsigned pos = n; pos-- > 0;) {
            w[pos] = rem % N;
            rem /= N;
        }
        out.push_back(std::move(w));
    }
    return out;
}

bool box_contained(const Box& inner, const std::vector<Rational>& lo,
                   const std::vector<Rational>& hi) {
    for (std::size_t i = 0; i < inner.lo.size(); ++i)
        if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
    return true;
}

std::string word_string(const Word& w) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < w.size(); ++i) os << (i ? "," : "") << w[i];
    os << "]";
    return os.str();
}

} // namespace

CheckReport invariance_check_weighted(const ProductSet& ps, int max_level,
                                      const Rational& weight) {
    ps.validate();
    if (max_level < 0) throw invalid_argument_error("invariance check: level must be >= 0");
    const int d = ps.dim();
    const std::uint64_t N = ps.branch_count();
    CheckReport rep;

    for (int n = 0; n <= max_level; ++n) {
        const auto words = all_words(ps, static_cast<unsigned>(n));
        const int L = std::max(n - 1, 0);
        const auto subwords = all_words(ps, static_cast<unsigned>(L));
        std::vector<Box> subboxes;
        subboxes.reserve(subwords.size());
        for (const auto& v : subwords) subboxes.push_back(cylinder_box(ps, v));
        const Rational submass(1, ipow(BigInt(N), static_cast<unsigned>(L)));

        for (const auto& w : words) {
            const Box box = cylinder_box(ps, w);
            Rational rhs = 0;
            for (std::uint64_t s = 0; s < N; ++s) {
                const auto digs = ps.symbol_digits(s);
                std::vector<Rational> plo(static_cast<std::size_t>(d)),
                    phi(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i) {
                    const auto ui = static_cast<std::size_t>(i);
                    plo[ui] = box.lo[ui] * ps.base - digs[ui];
                    phi[ui] = box.hi[ui] * ps.base - digs[ui];
                }
                Rational mass = 0;
                for (const auto& sb : subboxes)
                    if (box_contained(sb, plo, phi)) mass += submass;
                rhs += weight * mass;
            }
            const Rational lhs(1, ipow(BigInt(N), static_cast<unsigned>(n)));
            ++rep.checked;
            if (lhs != rhs) {
                rep.pass = false;
                rep.counterexample = "level " + std::to_string(n) + " word " + word_string(w);
                return rep;
            }
        }
    }
    return rep;
}

CheckReport invariance_check(const ProductSet& ps, int max_level) {
    return invariance_check_weighted(ps, max_level, Rational(1, BigInt(ps.branch_count())));
}

CheckReport product_equals_selfsimilar(const ProductSet& ps, int max_level) {
    ps.validate();
    if (max_level < 0) throw invalid_argument_error("product check: level must be >= 0");
    const int d = ps.dim();
    CheckReport rep;

    // enumerate per-coordinate level tuples
    std::vector<int> levels(static_cast<std::size_t>(d), 0);
    while (true) {
        const int L = *std::max_element(levels.begin(), levels.end());
        // enumerate one coordinate word per coordinate at its level
        std::vector<std::uint64_t> counts(static_cast<std::size_t>(d), 1);
        for (int i = 0; i < d; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            for (int k = 0; k < levels[ui]; ++k)
                counts[ui] *= static_cast<std::uint64_t>(ps.coords[ui].count());
        }
        std::uint64_t rect_total = 1;
        for (auto c : counts) rect_total *= c;
        if (rect_total > kEnumGuard) throw guard_error("product check: too many rectangles");

        const auto symbol_words = all_words(ps, static_cast<unsigned>(L));
        std::vector<Box> symbol_boxes;
        symbol_boxes.reserve(symbol_words.size());
        for (const auto& w : symbol_words) symbol_boxes.push_back(cylinder_box(ps, w));
        const Rational unit(1, ipow(BigInt(ps.branch_count()), static_cast<unsigned>(L)));

        for (std::uint64_t ridx = 0; ridx < rect_total; ++ridx) {
            // decode one digit-word per coordinate
            std::uint64_t rem = ridx;
            std::vector<Rational> rlo(static_cast<std::size_t>(d)), rhi(static_cast<std::size_t>(d));
            Rational product_mass = 1;
            for (int i = d - 1; i >= 0; --i) {
                const auto ui = static_cast<std::size_t>(i);
                const auto& ds = ps.coords[ui];
                std::uint64_t widx = rem % counts[ui];
                rem /= counts[ui];
                BigInt P = 0;
                for (int k = 0; k < levels[ui]; ++k) {
                    const auto nd = static_cast<std::uint64_t>(ds.count());
                    P = P * ds.base + ds.digits[static_cast<std::size_t>(widx % nd)];
                    widx /= nd;
                }
                const BigInt bl = ipow(ds.base, static_cast<unsigned>(levels[ui]));
                rlo[ui] = (Rational(P) + Rational(ds.min_digit(), ds.base - 1)) / Rational(bl);
                rhi[ui] = (Rational(P) + Rational(ds.max_digit(), ds.base - 1)) / Rational(bl);
                product_mass /= ipow(BigInt(ds.count()), static_cast<unsigned>(levels[ui]));
            }
            Rational tree_mass = 0;
            for (const auto& sb : symbol_boxes)
                if (box_contained(sb, rlo, rhi)) tree_mass += unit;
            ++rep.checked;
            if (tree_mass != product_mass) {
                rep.pass = false;
                std::ostringstream os;
                os << "levels (";
                for (int i = 0; i < d; ++i) os << (i ? "," : "") << levels[static_cast<std::size_t>(i)];
                os << ") rectangle #" << ridx;
                rep.counterexample = os.str();
                return rep;
            }
        }

        // odometer over level tuples
        int pos = 0;
        while (pos < d && ++levels[static_cast<std::size_t>(pos)] > max_level) {
            levels[static_cast<std::size_t>(pos)] = 0;
            ++pos;
        }
        if (pos == d) break;
    }
    return rep;
}

CheckReport mass_partition_check(const ProductSet& ps, int max_level) {
    ps.validate();
    CheckReport rep;
    for (int n = 0; n <= max_level; ++n) {
        Rational sum = 0;
        for (const auto& w : all_words(ps, static_cast<unsigned>(n))) sum += cylinder_mass(ps, w);
        ++rep.checked;
        if (sum != 1) {
            rep.pass = false;
            rep.counterexample = "level " + std::to_string(n);
            return rep;
        }
    }
    return rep;
}

} // namespace mdset
