#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <utility>
#include <vector>

#include "mdset/boxcount.hpp"
#include "mdset/sampling.hpp"

using namespace mdset;

namespace {

const DigitSet kThirds{3, {0, 2}};
ProductSet line3() { return ProductSet{3, {kThirds}}; }
ProductSet square3() { return ProductSet{3, {kThirds, kThirds}}; }
constexpr double kGamma1 = 0.6309297535714574; // log 2 / log 3

PointDigits zero_point(int d) {
    PointDigits x;
    x.coords.assign(d, CoordDigits{{}, {0}});
    return x;
}

} // namespace

TEST_CASE("attractor grid counts are exactly N^m") {
    CHECK(box_count_attractor(line3(), 5) == 32);
    CHECK(box_count_attractor(line3(), 0) == 1);

    const DigitSet q{4, {0, 3}};
    CHECK(box_count_attractor(ProductSet{4, {q, q}}, 3) == 64);

    for (unsigned m = 1; m <= 6; ++m)
        CHECK(box_count_attractor(square3(), m) == ipow(BigInt(4), m));

    Rng rng(71);
    for (int trial = 0; trial < 40; ++trial) {
        const auto ps = random_product_set(rng, 3, 6);
        BigInt branches = 1;
        for (const auto& ds : ps.coords) branches *= ds.count();
        for (unsigned m = 0; m <= 3; ++m) {
            if (ipow(branches, m) > 100000) break;
            CHECK(box_count_attractor(ps, m) == ipow(branches, m));
        }
    }

    CHECK_THROWS_AS(box_count_attractor(line3(), 24), guard_error);
}

TEST_CASE("generation counts: pinned digit enumerations") {
    const auto ps = line3();
    const auto x = zero_point(1);
    const auto psi = PsiSpec::make_power(1.0);

    // half-width psi(9) = 1/9: every admissible level-4 cell is touched
    CHECK(box_count_generation(ps, x, psi, {0.0}, 2, 4) == 16);
    // half-width psi(9)^2 = 1/81: one cell per rectangle
    CHECK(box_count_generation(ps, x, psi, {1.0}, 2, 4) == 4);
    CHECK(box_count_generation(ps, x, psi, {1.0}, 1, 4) == 8);
    CHECK(box_count_generation(ps, x, psi, {1.0}, 3, 4) == 8);

    // rectangles at least cylinder-sized keep every admissible cell covered,
    // so the count stays flat (and in particular never increases) in n
    for (unsigned n = 1; n <= 6; ++n)
        CHECK(box_count_generation(ps, x, psi, {0.0}, n, 4) == 16);

    // generation 0 is the single unit rectangle around x
    CHECK(box_count_generation(ps, x, psi, {0.0}, 0, 4) == 16);
    CHECK(box_count_generation(ps, x, psi, {3.0}, 0, 6) == 64);

    // orbit base point 1/3 = 0.0(2): centers (w + 1/3)/3 land mid-cylinder
    PointDigits third;
    third.coords.push_back(CoordDigits{{0}, {2}});
    CHECK(box_count_generation(ps, third, psi, {0.0}, 1, 2) == 4);

    // non-snapped half-side: psi(9)^1 for psi(q) = q^-0.7 rounds outward to
    // 53/243 and the touched cells were enumerated by hand
    CHECK(box_count_generation(ps, x, PsiSpec::make_power(0.7), {0.0}, 2, 3) == 8);
}

TEST_CASE("four-corner generations count 8^n at the matched scale") {
    const auto ps = square3();
    const auto x = zero_point(2);
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{0.0, 1.0};
    for (unsigned n = 1; n <= 5; ++n)
        CHECK(box_count_generation(ps, x, psi, t, n, 2 * n) == ipow(BigInt(8), n));
}

TEST_CASE("thread splits change nothing") {
    const auto ps = square3();
    const auto x = zero_point(2);
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{0.0, 1.0};
    const BigInt one = box_count_generation(ps, x, psi, t, 4, 8, 1);
    CHECK(one == ipow(BigInt(8), 4));
    CHECK(box_count_generation(ps, x, psi, t, 4, 8, 3) == one);
    CHECK(box_count_generation(ps, x, psi, t, 4, 8, 8) == one);
    CHECK_THROWS_AS(box_count_generation(ps, x, psi, t, 4, 8, 0), invalid_argument_error);
}

TEST_CASE("finer grids never lose cells") {
    const auto ps = square3();
    const auto x = zero_point(2);
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{0.0, 1.0};
    BigInt prev = 0;
    for (unsigned m = 6; m <= 10; ++m) {
        const BigInt c = box_count_generation(ps, x, psi, t, 3, m);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("wide keys: four coordinates at a deep grid") {
    const ProductSet ps{3, {kThirds, kThirds, kThirds, kThirds}};
    const auto x = zero_point(4);
    const auto psi = PsiSpec::make_power(1.0);
    const std::vector<double> t{6.0, 6.0, 6.0, 6.0};
    // per rectangle each axis meets 8 cells; the 16 rectangles are disjoint
    const BigInt c = box_count_generation(ps, x, psi, t, 1, 10, 1);
    CHECK(c == 65536);
    CHECK(box_count_generation(ps, x, psi, t, 1, 10, 4) == c);
}

TEST_CASE("generation count guards") {
    const DigitSet wide{10, {0, 9}};
    const ProductSet ps{10, {wide}};
    const auto psi = PsiSpec::make_power(1.0);
    // 10^20 cells per axis cannot index a 64-bit cell id
    CHECK_THROWS_AS(box_count_generation(ps, zero_point(1), psi, {0.0}, 1, 20), guard_error);
    // psi must shrink below 1 from generation 1 on
    CHECK_THROWS_AS(box_count_generation(line3(), zero_point(1), PsiSpec::make_powerlog(1.0, 1.0),
                                         {0.0}, 0, 3),
                    invalid_argument_error);
    // enumeration guard on N^n
    CHECK_THROWS_AS(box_count_generation(square3(), zero_point(2), psi, {0.0, 0.0}, 24, 2),
                    guard_error);
}

TEST_CASE("random instances stay within attractor bounds") {
    Rng rng(1009);
    const std::vector<double> cs{0.5, 1.0, 1.5};
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto ps = random_product_set(rng, 2, 5);
        const auto t = random_weights(rng, ps.dim(), 2.0);
        const auto psi = PsiSpec::make_power(cs[trial % cs.size()]);
        const unsigned n = 1 + trial % 2;
        const unsigned m = n + 1;
        BigInt cells = 1;
        for (const auto& ds : ps.coords) cells *= ipow(BigInt(ds.count()), m);
        if (cells > 200000) continue;
        const auto x = min_fixed_point(ps);
        const BigInt c = box_count_generation(ps, x, psi, t, n, m);
        CHECK(c >= 1);
        CHECK(c <= cells);
        CHECK(box_count_generation(ps, x, psi, t, n, m, 2) == c);
        ++checked;
    }
    CHECK(checked > 30);
}

TEST_CASE("slope fits recover exact exponents") {
    std::vector<std::pair<unsigned, BigInt>> series;
    for (unsigned m = 1; m <= 8; ++m) series.emplace_back(m, ipow(BigInt(2), m));
    const auto fit = slope_fit(3, series);
    CHECK(fit.slope == doctest::Approx(kGamma1).epsilon(1e-12));
    CHECK(fit.std_error < 1e-9);

    series.clear();
    for (unsigned m = 1; m <= 7; ++m) series.emplace_back(m, box_count_attractor(square3(), m));
    const auto fit2 = slope_fit(3, series);
    CHECK(fit2.slope == doctest::Approx(2 * kGamma1).epsilon(1e-12));
    CHECK(fit2.std_error < 1e-9);

    // a single generation-0 rectangle swallows the hull: pure gamma again
    series.clear();
    const auto psi = PsiSpec::make_power(1.0);
    for (unsigned m = 2; m <= 6; ++m)
        series.emplace_back(m,
                            box_count_generation(line3(), zero_point(1), psi, {0.0}, 0, m));
    const auto fit3 = slope_fit(3, series);
    CHECK(fit3.slope == doctest::Approx(kGamma1).epsilon(1e-12));

    CHECK_THROWS_AS(slope_fit(3, {{1, BigInt(4)}, {2, BigInt(8)}}), invalid_argument_error);
    CHECK_THROWS_AS(slope_fit(3, {{1, BigInt(4)}, {2, BigInt(4)}, {3, BigInt(4)}}),
                    invalid_argument_error);
    CHECK_THROWS_AS(slope_fit(3, {{1, BigInt(4)}, {2, BigInt(0)}, {3, BigInt(8)}}),
                    invalid_argument_error);
    CHECK_THROWS_AS(slope_fit(1, {{1, BigInt(2)}, {2, BigInt(4)}, {3, BigInt(8)}}),
                    invalid_argument_error);
}

TEST_CASE("dimension probe tracks the weighted formula") {
    const auto psi = PsiSpec::make_power(1.0);

    const auto rep = empirical_dimension_probe(square3(), zero_point(2), psi, {0.0, 1.0},
                                               {1, 2, 3, 4});
    CHECK(rep.matched_coord == 1);
    CHECK(rep.reference == doctest::Approx(0.9463946303571861).epsilon(1e-12));
    const double law = 3.0 * std::log(2.0) / (2.0 * std::log(3.0));
    for (const auto& row : rep.rows) {
        CHECK(row.m == 2 * row.n);
        CHECK(row.count == ipow(BigInt(8), row.n));
        CHECK(row.exponent == doctest::Approx(law).epsilon(1e-12));
    }

    // equal weights reduce to plain cylinder counting: exponent = gamma
    const auto flat = empirical_dimension_probe(square3(), zero_point(2), psi, {0.0, 0.0},
                                                {3, 5});
    for (const auto& row : flat.rows) {
        CHECK(row.m == row.n);
        CHECK(row.count == ipow(BigInt(4), row.n));
        CHECK(row.exponent == doctest::Approx(2 * kGamma1).epsilon(1e-12));
    }

    // one coordinate: the degenerate weighted value gamma_1/(1+t_1)
    const auto d1 = empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {8});
    CHECK(d1.rows.front().m == 12);
    CHECK(d1.rows.front().count == 256);
    CHECK(d1.rows.front().exponent == doctest::Approx(kGamma1 / 1.5).epsilon(1e-12));
    CHECK(d1.reference == doctest::Approx(kGamma1 / 1.5).epsilon(1e-12));

    // grid policies split a half-integer scale match
    const auto near = empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {3});
    const auto finer = empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {3}, 1,
                                                 GridPolicy::finer);
    const auto coarser = empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {3}, 1,
                                                   GridPolicy::coarser);
    CHECK(near.rows.front().m == 5);
    CHECK(finer.rows.front().m == 5);
    CHECK(coarser.rows.front().m == 4);
    CHECK(coarser.rows.front().count >= 1);

    // table specs answer exactly at their listed generations
    const auto tab = PsiSpec::make_table({{2, 1.0 / 9.0}});
    const auto trep = empirical_dimension_probe(line3(), zero_point(1), tab, {0.0}, {2});
    CHECK(trep.rows.front().m == 2);
    CHECK(trep.rows.front().count == 4);
    CHECK(trep.rows.front().exponent == doctest::Approx(kGamma1).epsilon(1e-12));

    CHECK_THROWS_AS(empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {}),
                    invalid_argument_error);
    CHECK_THROWS_AS(empirical_dimension_probe(line3(), zero_point(1), psi, {0.5}, {0}),
                    invalid_argument_error);
}
