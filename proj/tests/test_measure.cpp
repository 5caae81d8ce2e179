#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mdset/measure.hpp"

using namespace mdset;

namespace {

const DigitSet kThirds{3, {0, 2}};

ProductSet square3() { return ProductSet{3, {kThirds, kThirds}}; }

} // namespace

TEST_CASE("cylinder masses") {
    const auto ps = square3();
    CHECK(cylinder_mass(ps, {}) == 1);
    CHECK(cylinder_mass(ps, {0}) == Rational(1, 4));
    CHECK(cylinder_mass(ps, {3, 1, 2}) == Rational(1, 64));
    CHECK_THROWS_AS(cylinder_mass(ps, {4}), invalid_argument_error);
}

TEST_CASE("interval masses, exact brackets") {
    // left third carries exactly half the measure, at any depth
    for (int depth : {0, 1, 4, 8}) {
        const auto m = interval_mass(kThirds, Rational(0), Rational(1, 3), depth);
        if (depth >= 1) {
            CHECK(m.lower == Rational(1, 2));
            CHECK(m.upper == Rational(1, 2));
        } else {
            CHECK(m.lower <= Rational(1, 2));
            CHECK(m.upper >= Rational(1, 2));
        }
    }
    const auto whole = interval_mass(kThirds, Rational(0), Rational(1), 0);
    CHECK(whole.lower == 1);
    CHECK(whole.upper == 1);

    // the middle gap meets the set only at 1/3 = 0.0(2) and 2/3 = 0.2(0);
    // mass zero, and the upper end tracks the two boundary chains: 2 * 2^-depth
    const auto gap4 = interval_mass(kThirds, Rational(1, 3), Rational(2, 3), 4);
    CHECK(gap4.lower == 0);
    CHECK(gap4.upper == Rational(1, 8));
    const auto gap7 = interval_mass(kThirds, Rational(1, 3), Rational(2, 3), 7);
    CHECK(gap7.upper == Rational(1, 64));
}

TEST_CASE("bracket tightens monotonically with depth") {
    const Rational lo(1, 5), hi(4, 5);
    MassInterval prev = interval_mass(kThirds, lo, hi, 0);
    for (int depth = 1; depth <= 8; ++depth) {
        const auto cur = interval_mass(kThirds, lo, hi, depth);
        CHECK(cur.lower >= prev.lower);
        CHECK(cur.upper <= prev.upper);
        CHECK(cur.lower <= cur.upper);
        prev = cur;
    }
}

TEST_CASE("ball masses: line oracles") {
    const ProductSet line{3, {kThirds}};
    const auto m = ball_mass(line, {Rational(0)}, Rational(1, 3), 2);
    CHECK(m.lower == Rational(1, 2));
    CHECK(m.upper == Rational(1, 2));
}

TEST_CASE("ball masses: swallow and corner alignment") {
    const auto ps = square3();
    // radius = diameter and center in the set: everything is inside
    const auto all = ball_mass(ps, {Rational(0), Rational(1)}, Rational(1), 3);
    CHECK(all.lower == 1);
    CHECK(all.upper == 1);

    // ball of radius 3^-n at a cylinder corner touches few cylinders
    const int n = 3;
    const Rational r(1, ipow(3, n));
    const auto m = ball_mass(ps, {Rational(0), Rational(0)}, r, n + 3);
    const Rational unit(1, ipow(4, n));
    CHECK(m.lower >= unit);
    CHECK(m.upper <= 9 * unit);
}

TEST_CASE("both evaluation routes agree exactly") {
    const auto ps = square3();
    const std::vector<std::vector<Rational>> centers = {
        {Rational(0), Rational(0)},
        {Rational(1, 4), Rational(2, 3)},
        {Rational(1), Rational(1, 9)},
        {Rational(1, 2), Rational(1, 2)}, // center off the set is fine too
    };
    for (const auto& c : centers) {
        for (const Rational& r : {Rational(1, 3), Rational(1, 7), Rational(2, 9), Rational(1, 50)}) {
            for (int depth : {2, 4, 6}) {
                const auto a = ball_mass(ps, c, r, depth, MeasureMode::self_similar);
                const auto b = ball_mass(ps, c, r, depth, MeasureMode::product);
                CHECK(a.lower == b.lower);
                CHECK(a.upper == b.upper);
            }
        }
    }
}

TEST_CASE("ball mass validation") {
    const auto ps = square3();
    CHECK_THROWS_AS(ball_mass(ps, {Rational(0)}, Rational(1), 2), invalid_argument_error);
    const std::vector<Rational> c{Rational(0), Rational(0)};
    CHECK_THROWS_AS(ball_mass(ps, c, Rational(0), 2), invalid_argument_error);
    CHECK_THROWS_AS(ball_mass(ps, c, Rational(1), -1), invalid_argument_error);
}

TEST_CASE("ahlfors ratios stay within fixed constants") {
    const auto ps = square3();
    const auto rep = ahlfors_check(ps, 60, Rational(1, ipow(3, 8)), Rational(1, 9), 17);
    CHECK(rep.samples == 60);
    CHECK(rep.c1 > 0);
    CHECK(rep.c2 >= rep.c1);
    CHECK(rep.c2 / rep.c1 < 50.0);

    // degenerate radius range at the diameter: the ball swallows the set
    const auto deg = ahlfors_check(ps, 5, Rational(1), Rational(1), 3);
    CHECK(deg.c1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(deg.c2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("invariance holds exactly, for spanning and interior alphabets") {
    CHECK(invariance_check(square3(), 3).pass);
    const ProductSet inner{5, {DigitSet{5, {1, 3}}, DigitSet{5, {0, 2, 4}}}};
    const auto rep = invariance_check(inner, 2);
    CHECK(rep.pass);
    CHECK(rep.checked == 1 + 6 + 36);
}

TEST_CASE("corrupted weights break invariance immediately") {
    const auto ps = square3();
    const auto rep = invariance_check_weighted(ps, 2, Rational(1, 5));
    CHECK(!rep.pass);
    CHECK(rep.counterexample.find("level 0") != std::string::npos);
}

TEST_CASE("product route equals branch-tree route on every rectangle") {
    const auto rep = product_equals_selfsimilar(square3(), 3);
    CHECK(rep.pass);
    CHECK(rep.checked == 225); // (1+2+4+8)^2 rectangles across level tuples

    const ProductSet mixed{5, {DigitSet{5, {1, 3}}, DigitSet{5, {0, 2, 4}}}};
    CHECK(product_equals_selfsimilar(mixed, 2).pass);
}

TEST_CASE("masses partition the whole set") {
    CHECK(mass_partition_check(square3(), 4).pass);
    const ProductSet line{3, {kThirds}};
    CHECK(mass_partition_check(line, 6).pass);
}
