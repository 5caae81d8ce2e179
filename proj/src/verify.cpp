#include "mdset/verify.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <utility>

#include "mdset/boxcount.hpp"
#include "mdset/cover.hpp"
#include "mdset/dim_formulas.hpp"
#include "mdset/error.hpp"
#include "mdset/measure.hpp"
#include "mdset/mtp.hpp"
#include "mdset/sampling.hpp"

namespace mdset {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string describe(const ProductSet& ps, const std::vector<double>& t) {
    std::ostringstream os;
    os << "base=" << ps.base << " coords=[";
    for (std::size_t i = 0; i < ps.coords.size(); ++i) {
        if (i) os << "|";
        for (std::size_t j = 0; j < ps.coords[i].digits.size(); ++j) {
            if (j) os << ",";
            os << ps.coords[i].digits[j];
        }
    }
    os << "] t=[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << fmt(t[i]);
    }
    os << "]";
    return os.str();
}

void record(SuiteResult& s, bool ok, const std::string& why) {
    ++s.cases;
    if (ok) return;
    ++s.failures;
    if (s.first_failure.empty()) s.first_failure = why;
}

void absorb(SuiteResult& s, const CheckReport& r, const std::string& label) {
    s.cases += r.checked;
    if (r.pass) return;
    ++s.failures;
    if (s.first_failure.empty()) s.first_failure = label + ": " + r.counterexample;
}

Rational pow_signed(const Rational& x, long long e) {
    const Rational base = e >= 0 ? x : Rational(1) / x;
    Rational r = 1;
    for (long long i = 0, m = e >= 0 ? e : -e; i < m; ++i) r *= base;
    return r;
}

SuiteResult equivalence_suite(std::uint64_t seed) {
    SuiteResult s;
    s.name = "formula-transference-equivalence";
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto ps = random_product_set(rng);
        const auto t = random_weights(rng, ps.dim());
        const auto r = closed_form_equiv(ps, t);
        record(s, r.pass,
               describe(ps, t) + " formula=" + fmt(r.formula_value) +
                   " transference=" + fmt(r.mtp_value) +
                   (r.argmin_match ? "" : " argmin-mismatch"));
    }
    return s;
}

SuiteResult measure_suite(bool corrupt) {
    SuiteResult s;
    s.name = "measure-invariance";
    const DigitSet thirds{3, {0, 2}};
    const ProductSet ps{3, {thirds, thirds}};
    if (corrupt) {
        // wrong weight 1/3 on a 4-branch system: the identity must break
        absorb(s, invariance_check_weighted(ps, 3, Rational(1, 3)), "weighted");
    } else {
        absorb(s, invariance_check(ps, 4), "invariance");
    }
    absorb(s, mass_partition_check(ps, 4), "partition");
    absorb(s, product_equals_selfsimilar(ps, 4), "product");
    return s;
}

SuiteResult sandwich_suite(std::uint64_t seed) {
    SuiteResult s;
    s.name = "cover-scale-sandwich";
    Rng rng(seed ^ 0xda942042e4dd58b5ULL);
    // decay exponents on a quarter grid and weights on a half grid keep
    // every rectangle-side exponent in (1/8) Z, so both ladder sandwiches
    // can be verified in exact rational arithmetic via 8th powers
    const double cs[] = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
    const double ts[] = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    while (s.cases < 10000) {
        const int b = static_cast<int>(uniform_int(rng, 3, 8));
        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 6));
        const double c = cs[static_cast<std::size_t>(uniform_int(rng, 0, 6))];
        double tj = ts[static_cast<std::size_t>(uniform_int(rng, 0, 5))];
        double tk = ts[static_cast<std::size_t>(uniform_int(rng, 0, 5))];
        if (tj > tk) std::swap(tj, tk);
        if (tj == tk) tk += 0.5;
        const auto psi = PsiSpec::make_power(c);
        const auto lv = cover_levels(psi, b, tj, tk, n);
        const auto e8_j = static_cast<long long>(std::llround(8.0 * n * c * (1 + tj)));
        const auto e8_k = static_cast<long long>(std::llround(8.0 * n * c * (1 + tk)));
        const Rational rb(b);
        const Rational mid_j = Rational(256) * pow_signed(rb, -e8_j);
        const Rational mid_k = pow_signed(rb, -e8_k);
        const bool ok = lv.v >= 0 && pow_signed(rb, -8 * lv.u) <= mid_j &&
                        mid_j < pow_signed(rb, -8 * (lv.u - 1)) &&
                        pow_signed(rb, -8 * (lv.u + lv.v)) <= mid_k &&
                        mid_k < pow_signed(rb, -8 * (lv.u + lv.v - 1));
        std::ostringstream why;
        why << "b=" << b << " n=" << n << " c=" << fmt(c) << " tj=" << fmt(tj)
            << " tk=" << fmt(tk) << " u=" << lv.u << " v=" << lv.v;
        record(s, ok, why.str());
    }
    return s;
}

SuiteResult chain_suite(std::uint64_t seed) {
    SuiteResult s;
    s.name = "cover-count-chain";
    Rng rng(seed ^ 0x243f6a8885a308d3ULL);
    for (int trial = 0; trial < 1500; ++trial) {
        const auto ps = random_product_set(rng, 4, 9);
        const auto t = random_weights(rng, ps.dim(), 3.0);
        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 8));
        const double c = uniform(rng, 0.3, 2.0);
        const auto psi = PsiSpec::make_power(c);
        const auto d = static_cast<std::size_t>(ps.dim());
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                const auto cc = cover_count_bound(ps, psi, t, n, j, k);
                if (!cc.refined) continue;
                const bool ok = cc.log_count <= cc.log_refined_bound + 1e-9 &&
                                cc.log_refined_bound <= cc.log_closed_bound + 1e-9;
                std::ostringstream why;
                why << describe(ps, t) << " n=" << n << " c=" << fmt(c) << " j=" << j
                    << " k=" << k << " count=" << fmt(std::exp(cc.log_count))
                    << " refined=" << fmt(std::exp(cc.log_refined_bound))
                    << " closed=" << fmt(std::exp(cc.log_closed_bound));
                record(s, ok, why.str());
            }
        }
    }
    return s;
}

SuiteResult threshold_suite(std::uint64_t seed) {
    SuiteResult s;
    s.name = "threshold-duality";
    Rng rng(seed ^ 0x452821e638d01377ULL);
    for (int trial = 0; trial < 500; ++trial) {
        const auto ps = random_product_set(rng);
        const auto t = random_weights(rng, ps.dim());
        double best = s0_threshold(ps, t, 0);
        for (std::size_t k = 1; k < t.size(); ++k) best = std::min(best, s0_threshold(ps, t, k));
        const auto wd = weighted_dim(ps, t);
        record(s, std::abs(best - wd.value) <= 1e-12,
               describe(ps, t) + " min_s0=" + fmt(best) + " dim=" + fmt(wd.value));
    }
    return s;
}

SuiteResult box_suite(int threads) {
    SuiteResult s;
    s.name = "threaded-box-counts";
    const DigitSet thirds{3, {0, 2}};
    const ProductSet ps{3, {thirds, thirds}};
    const auto x = min_fixed_point(ps);
    const auto psi = PsiSpec::make_power(1.0);
    for (unsigned n = 1; n <= 3; ++n) {
        const auto got = box_count_generation(ps, x, psi, {0.0, 1.0}, n, 2 * n, threads);
        const BigInt want = ipow(BigInt(8), n);
        record(s, got == want,
               "n=" + std::to_string(n) + " got=" + got.str() + " want=" + want.str());
    }
    const auto flat = box_count_generation(ps, x, psi, {0.0, 0.0}, 3, 3, threads);
    record(s, flat == 64, "flat n=3 got=" + flat.str());
    const auto attr = box_count_attractor(ps, 5);
    record(s, attr == 1024, "attractor m=5 got=" + attr.str());
    return s;
}

} // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& opt) {
    if (opt.threads < 1) throw invalid_argument_error("threads must be >= 1");
    std::vector<SuiteResult> out;
    out.push_back(equivalence_suite(opt.seed));
    out.push_back(measure_suite(opt.corrupt_measure));
    out.push_back(sandwich_suite(opt.seed));
    out.push_back(chain_suite(opt.seed));
    out.push_back(threshold_suite(opt.seed));
    out.push_back(box_suite(opt.threads));
    return out;
}

} // namespace mdset
