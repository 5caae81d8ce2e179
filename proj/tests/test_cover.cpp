#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mdset/cover.hpp"
#include "mdset/dim_formulas.hpp"
#include "mdset/sampling.hpp"

using namespace mdset;

namespace {

const DigitSet kThirds{3, {0, 2}};
ProductSet square3() { return ProductSet{3, {kThirds, kThirds}}; }
constexpr double kGamma1 = 0.6309297535714574; // log 2 / log 3

Rational pow_signed(const Rational& x, long long e) {
    const Rational base = e >= 0 ? x : Rational(1) / x;
    Rational r = 1;
    for (long long i = 0, m = e >= 0 ? e : -e; i < m; ++i) r *= base;
    return r;
}

} // namespace

TEST_CASE("scale ladder oracles") {
    const auto psi = PsiSpec::make_power(1.0);
    CHECK(coarse_level(psi, 3, 0.0, 2) == 2); // 1/9 <= 2/9 < 1/3

    const auto lv = cover_levels(psi, 3, 0.0, 1.0, 2);
    CHECK(lv.u == 2);
    CHECK(lv.v == 2); // 1/81 sits at 3^-4

    const auto lv2 = cover_levels(psi, 3, 0.0, 0.5, 2);
    CHECK(lv2.u == 2);
    CHECK(lv2.v == 1); // 1/27 sits at 3^-3

    CHECK_THROWS_AS(cover_levels(psi, 3, 1.0, 1.0, 2), invalid_argument_error);
    CHECK_THROWS_AS(cover_levels(psi, 3, 2.0, 1.0, 2), invalid_argument_error);
    CHECK_THROWS_AS(coarse_level(psi, 3, 0.0, 0), invalid_argument_error);
}

TEST_CASE("cube counts per coordinate") {
    const auto ps = square3();
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{0.0, 1.0};

    const auto cc = cover_count_bound(ps, psi, t, 2, 0, 1);
    CHECK(cc.refined);
    CHECK(cc.count == 8); // 2 * 2^2
    CHECK(cc.log_count == doctest::Approx(std::log(8.0)).epsilon(1e-12));
    // middle majorant: 2 * (3^-1 * 81)^gamma1 = 2 * 27^gamma1 = 16
    CHECK(std::exp(cc.log_refined_bound) == doctest::Approx(16.0).epsilon(1e-9));
    // closed majorant: 2^(1+g) 3^g 9^g
    const double closed =
        std::pow(2.0, 1 + kGamma1) * std::pow(3.0, kGamma1) * std::pow(9.0, kGamma1);
    CHECK(std::exp(cc.log_closed_bound) == doctest::Approx(closed).epsilon(1e-9));
    CHECK(cc.log_count <= cc.log_refined_bound + 1e-9);
    CHECK(cc.log_refined_bound <= cc.log_closed_bound + 1e-9);

    // already-fine side: one cube
    const auto one = cover_count_bound(ps, psi, t, 2, 1, 0);
    CHECK_FALSE(one.refined);
    CHECK(one.count == 1);
    const auto self_pair = cover_count_bound(ps, psi, t, 2, 1, 1);
    CHECK(self_pair.count == 1);
}

TEST_CASE("sandwiches hold exactly on a rational exponent grid") {
    // c and the weights live on quarter/half grids, so psi(b^n)^(1+t) has an
    // exponent with denominator 8 and sandwiches can be checked in exact
    // rational arithmetic via 8th powers.
    Rng rng(2024);
    const std::vector<double> cs{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0};
    const std::vector<double> ts{0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
    int checked = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const int b = static_cast<int>(uniform_int(rng, 3, 8));
        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 6));
        const double c = cs[static_cast<std::size_t>(uniform_int(rng, 0, 6))];
        const double tj = ts[static_cast<std::size_t>(uniform_int(rng, 0, 4))];
        double tk = ts[static_cast<std::size_t>(uniform_int(rng, 0, 5))];
        if (!(tj < tk)) continue;
        const auto psi = PsiSpec::make_power(c);
        const auto lv = cover_levels(psi, b, tj, tk, n);
        REQUIRE(lv.v >= 0);

        // exact: b^-u <= 2 b^-e < b^-(u-1) with e = n c (1+tj), via 8th powers
        const auto e8_j = static_cast<long long>(std::llround(8.0 * n * c * (1 + tj)));
        const auto e8_k = static_cast<long long>(std::llround(8.0 * n * c * (1 + tk)));
        const Rational rb(b);
        const Rational lhs_j = pow_signed(rb, -8 * lv.u);
        const Rational mid_j = Rational(256) * pow_signed(rb, -e8_j);
        REQUIRE(lhs_j <= mid_j);
        REQUIRE(mid_j < pow_signed(rb, -8 * (lv.u - 1)));

        const Rational lhs_k = pow_signed(rb, -8 * (lv.u + lv.v));
        const Rational mid_k = pow_signed(rb, -e8_k);
        REQUIRE(lhs_k <= mid_k);
        REQUIRE(mid_k < pow_signed(rb, -8 * (lv.u + lv.v - 1)));
        ++checked;
    }
    CHECK(checked > 800);
}

TEST_CASE("count chain holds on random smooth instances") {
    Rng rng(7);
    int checked = 0;
    for (int trial = 0; trial < 400; ++trial) {
        const auto ps = random_product_set(rng, 3, 7);
        const auto d = static_cast<std::size_t>(ps.dim());
        auto t = random_weights(rng, ps.dim(), 3.0);
        const auto n = static_cast<unsigned>(uniform_int(rng, 1, 8));
        const double c = uniform(rng, 0.3, 2.0);
        const auto psi = PsiSpec::make_power(c);
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < d; ++k) {
                const auto cc = cover_count_bound(ps, psi, t, n, j, k);
                if (!cc.refined) continue;
                CHECK(cc.log_count <= cc.log_refined_bound + 1e-9);
                CHECK(cc.log_refined_bound <= cc.log_closed_bound + 1e-9);
                ++checked;
            }
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("generation rectangles: counts, centers, trivial generation") {
    const ProductSet line{3, {kThirds}};
    const auto psi = PsiSpec::make_power(1.0);
    const auto x = min_fixed_point(line);

    const auto rects = generation_rectangles(line, x, psi, {0.0}, 2);
    REQUIRE(rects.size() == 4);
    CHECK(rects[0].center[0] == Rational(0));
    CHECK(rects[1].center[0] == Rational(2, 9));
    CHECK(rects[2].center[0] == Rational(2, 3));
    CHECK(rects[3].center[0] == Rational(8, 9));
    for (const auto& r : rects) CHECK(r.half[0] == doctest::Approx(1.0 / 9).epsilon(1e-15));

    const auto root = generation_rectangles(line, x, psi, {0.0}, 0);
    REQUIRE(root.size() == 1);
    CHECK(root[0].center[0] == Rational(0));
    CHECK(root[0].half[0] == 1.0);

    const auto sq = square3();
    const auto xs = min_fixed_point(sq);
    CHECK(generation_rectangles(sq, xs, psi, {0.0, 1.0}, 3).size() == 64);
    // half-sides follow the per-coordinate weights
    const auto g3 = generation_rectangles(sq, xs, psi, {0.0, 1.0}, 3);
    CHECK(g3[0].half[0] == doctest::Approx(std::pow(27.0, -1.0)));
    CHECK(g3[0].half[1] == doctest::Approx(std::pow(27.0, -2.0)));

    CHECK_THROWS_AS(generation_rectangles(sq, xs, psi, {0.0, 1.0}, 13), guard_error);
    const auto plog = PsiSpec::make_powerlog(1.0, 1.0);
    CHECK_THROWS_AS(generation_rectangles(sq, xs, plog, {0.0, 1.0}, 0), invalid_argument_error);
}

TEST_CASE("truncated sums: decay and growth") {
    const auto ps = square3();
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{0.0, 1.0};

    // far above the threshold the tail is strongly Cauchy
    const auto high = upper_sum(ps, psi, t, 1, 12.0, 1, 41);
    CHECK(high.log_last - high.log_first < std::log(1e-6));
    // and the log-terms decrease monotonically
    for (std::size_t i = 1; i < high.log_terms.size(); ++i)
        CHECK(high.log_terms[i].second < high.log_terms[i - 1].second);

    // s = 0 counts raw cubes: partial sums strictly increase with the horizon
    const auto raw10 = upper_sum(ps, psi, t, 1, 0.0, 1, 10);
    const auto raw11 = upper_sum(ps, psi, t, 1, 0.0, 1, 11);
    CHECK(raw11.log_sum > raw10.log_sum);
    for (std::size_t i = 1; i < raw10.log_terms.size(); ++i)
        CHECK(raw10.log_terms[i].second > raw10.log_terms[i - 1].second);

    // analytic mode majorizes the exact counts term by term
    const auto exact = upper_sum(ps, psi, t, 1, 1.0, 1, 20, CoverBoundMode::exact_count);
    const auto analytic = upper_sum(ps, psi, t, 1, 1.0, 1, 20, CoverBoundMode::analytic);
    REQUIRE(exact.log_terms.size() == analytic.log_terms.size());
    for (std::size_t i = 0; i < exact.log_terms.size(); ++i)
        CHECK(exact.log_terms[i].second <= analytic.log_terms[i].second + 1e-9);

    // slightly above the certified threshold with a log-corrected speed the
    // terms still decay beyond a burn-in
    const auto plog = PsiSpec::make_powerlog(1.0, 1.0 / (2 * kGamma1));
    const double s0 = s0_threshold(ps, t, 1);
    const auto near = upper_sum(ps, plog, t, 1, s0 + 0.05, 2, 60, CoverBoundMode::analytic);
    for (std::size_t i = 6; i < near.log_terms.size(); ++i)
        CHECK(near.log_terms[i].second < near.log_terms[i - 1].second);

    CHECK_THROWS_AS(upper_sum(ps, psi, t, 1, 1.0, 0, 5), invalid_argument_error);
    CHECK_THROWS_AS(upper_sum(ps, psi, t, 2, 1.0, 1, 5), invalid_argument_error);
}

TEST_CASE("threshold values and the dual route") {
    const auto ps = square3();
    CHECK(s0_threshold(ps, {0.0, 0.0}, 0) == doctest::Approx(2 * kGamma1).epsilon(1e-14));
    CHECK(s0_threshold(ps, {0.0, 0.0}, 1) == doctest::Approx(2 * kGamma1).epsilon(1e-14));

    const std::vector<double> t{0.0, 1.0};
    CHECK(s0_threshold(ps, t, 1) == doctest::Approx(0.9463946303571861).epsilon(1e-14));
    // k = 0 certifies only the weaker exponent gamma
    CHECK(s0_threshold(ps, t, 0) == doctest::Approx(2 * kGamma1).epsilon(1e-14));

    // min over k agrees with the direct weighted formula on random instances
    Rng rng(501);
    for (int trial = 0; trial < 500; ++trial) {
        const auto rps = random_product_set(rng);
        const auto t2 = random_weights(rng, rps.dim());
        double best = s0_threshold(rps, t2, 0);
        for (std::size_t k = 1; k < t2.size(); ++k)
            best = std::min(best, s0_threshold(rps, t2, k));
        const auto wd = weighted_dim(rps, t2);
        CHECK(best == doctest::Approx(wd.value).epsilon(1e-12));
    }
}

TEST_CASE("first generation reaching a target scale") {
    const auto psi = PsiSpec::make_power(1.0);
    // (3^-n)^2 <= rho
    CHECK(first_generation_below(psi, 3, 1.0, 1.0 / 729) == 3); // exact boundary
    CHECK(first_generation_below(psi, 3, 1.0, 1e-3) == 4);
    CHECK(first_generation_below(psi, 3, 1.0, 0.99) == 1);

    const auto table = PsiSpec::make_table({{1, 0.5}, {3, 0.25}, {7, 0.125}});
    CHECK(first_generation_below(table, 3, 0.0, 0.3) == 3);
    CHECK_THROWS_AS(first_generation_below(table, 3, 0.0, 1e-9), error);

    // a barely-decaying speed never reaches the target within the scan guard
    const auto slow = PsiSpec::make_power(1e-6);
    CHECK_THROWS_AS(first_generation_below(slow, 3, 0.0, 1e-3), guard_error);

    CHECK_THROWS_AS(first_generation_below(psi, 3, -1.0, 0.5), invalid_argument_error);
    CHECK_THROWS_AS(first_generation_below(psi, 3, 0.0, 0.0), invalid_argument_error);
}
