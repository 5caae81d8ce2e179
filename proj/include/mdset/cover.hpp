#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdset/arith.hpp"
#include "mdset/psi.hpp"
#include "mdset/set_core.hpp"

namespace mdset {

// Finite-stage shrinking-rectangle covers. A generation n places one
// rectangle around every word-image of the base point, with per-coordinate
// half-sides psi(b^n)^(1+t_j). Covering those rectangles by cubes at the
// finest rectangle scale gives countable costs whose truncated sums certify
// a dimension threshold.

// Refinement exponents larger than this abort instead of building huge counts.
inline constexpr long long kRefineGuard = 1'000'000;

// Forward scan limit for first_generation_below.
inline constexpr int kScanGuard = 1'000'000;

// One rectangle of a generation: exact center, per-coordinate half-sides
// (real-valued; consumers do their own outward rounding when they need
// exact endpoints).
struct GenRect {
    std::vector<Rational> center;
    std::vector<double> half;
};

// All N^n rectangles of generation n around the orbit of x, in word order.
// n = 0 yields the single rectangle around x itself (power family only;
// other families have no value at scale 1). For n >= 1 requires
// psi(b^n) < 1.
std::vector<GenRect> generation_rectangles(const ProductSet& ps, const PointDigits& x,
                                           const PsiSpec& psi, const std::vector<double>& t,
                                           unsigned n);

// b-adic scale exponents tying a rectangle side to the covering-cube side:
//   b^-u     <= 2 psi(b^n)^(1+t_j) < b^-(u-1)     (doubled side scale)
//   b^-(u+v) <=   psi(b^n)^(1+t_k) < b^-(u+v-1)   (cube scale)
// Defined for t_j < t_k and psi(b^n) < 1; v >= 0 always.
struct CoverLevels {
    long long u = 0;
    long long v = 0;
};

long long coarse_level(const PsiSpec& psi, int base, double t_j, unsigned n);
CoverLevels cover_levels(const PsiSpec& psi, int base, double t_j, double t_k, unsigned n);

// How many cubes of side psi(b^n)^(1+t_k) one rectangle needs along
// coordinate j: exactly 1 when t_j >= t_k (the side is already no wider
// than the cube), else at most 2 N_j^v, which sits under two closed-form
// majorants:
//   2 N_j^v <= 2 (b^(1-u) psi(b^n)^-(1+t_k))^gamma_j
//           <= 2^(1+gamma_j) b^gamma_j psi(b^n)^((t_j-t_k) gamma_j).
struct CoverCount {
    BigInt count = 1;
    double log_count = 0;          // ln count
    double log_refined_bound = 0;  // ln of the middle expression
    double log_closed_bound = 0;   // ln of the right expression
    bool refined = false;          // false: single-cube case, bounds unused
};

CoverCount cover_count_bound(const ProductSet& ps, const PsiSpec& psi,
                             const std::vector<double>& t, unsigned n, std::size_t j,
                             std::size_t k);

// Which per-coordinate factor the truncated sums use.
enum class CoverBoundMode {
    exact_count, // 2 N_j^v from the ladder integers
    analytic,    // closed-form majorant; no ladder integers involved
};

struct UpperSumReport {
    double log_sum = 0;
    double log_first = 0;
    double log_last = 0;
    std::vector<std::pair<int, double>> log_terms; // (n, ln term)
};

// ln of  sum_{n=n0}^{n_max} (psi(b^n)^(1+t_k))^s N^n prod_{j: t_j<t_k} count_j,
// accumulated stably in log-domain (peak shift + compensated summation).
UpperSumReport upper_sum(const ProductSet& ps, const PsiSpec& psi, const std::vector<double>& t,
                         std::size_t k, double s, int n0, int n_max,
                         CoverBoundMode mode = CoverBoundMode::exact_count);

// Exponent threshold the coordinate-k cost sum certifies:
//   (gamma + sum_{j: t_j < t_k} (t_k - t_j) gamma_j) / (1 + t_k).
// Its minimum over k equals the weighted dimension value.
double s0_threshold(const ProductSet& ps, const std::vector<double>& t, std::size_t k);

// Minimal n >= 1 with psi(b^n)^(1+t_k) <= rho, by forward scan. Formula
// families scan up to kScanGuard; tables scan their listed rows.
int first_generation_below(const PsiSpec& psi, int base, double t_k, double rho);

} // namespace mdset
