#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdset/arith.hpp"
#include "mdset/psi.hpp"
#include "mdset/set_core.hpp"

namespace mdset {

// Cap on grid cells a single count may touch (sum over rectangles of
// per-rectangle cell products, before dedup).
inline constexpr std::uint64_t kCellGuard = 50'000'000;

// How the probe turns a real matched scale exponent into a grid level.
enum class GridPolicy { nearest, finer, coarser };

// Exact number of closed b-adic grid boxes of side b^-m whose digit word is
// admissible in every coordinate; counted by enumeration and key dedup, and
// equal to N^m by cylinder/grid alignment.
BigInt box_count_attractor(const ProductSet& ps, unsigned m);

// Exact number of closed b-adic grid boxes of side b^-m that carry the
// attractor (admissible digit word) and meet some generation-n rectangle
// around the orbit of x. Half-sides psi(b^n)^(1+t_j) are outward-rounded to
// denominator b^(m+2) unless they are exact b-powers; box-vs-rectangle
// overlap is tested on exact rationals, closed against closed. The total is
// deterministic and independent of threads >= 1.
BigInt box_count_generation(const ProductSet& ps, const PointDigits& x, const PsiSpec& psi,
                            const std::vector<double>& t, unsigned n, unsigned m,
                            int threads = 1);

// Least-squares slope of ln(count) against ln(b^m).
struct SlopeFit {
    double slope = 0;
    double std_error = 0;
};

// Requires >= 3 points, positive counts, and a non-constant series.
SlopeFit slope_fit(int base, const std::vector<std::pair<unsigned, BigInt>>& series);

// One generation of the probe: count at the grid level matched to the
// finest rectangle side, and the implied exponent ln(count)/ln(b^m).
struct ProbeRow {
    unsigned n = 0;
    unsigned m = 0;
    BigInt count;
    double exponent = 0;
};

struct ProbeReport {
    std::vector<ProbeRow> rows;
    double reference = 0;    // weighted dimension value the exponents track
    int matched_coord = 0;   // coordinate whose side fixes the grid level
};

// For each n, picks m with b^-m ~ psi(b^n)^(1+t_k*) (k* = first argmin of
// the weighted dimension formula) and reports the box-count exponent.
ProbeReport empirical_dimension_probe(const ProductSet& ps, const PointDigits& x,
                                      const PsiSpec& psi, const std::vector<double>& t,
                                      const std::vector<unsigned>& n_list, int threads = 1,
                                      GridPolicy policy = GridPolicy::nearest);

} // namespace mdset
