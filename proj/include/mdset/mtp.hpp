#pragma once

#include <cstdint>
#include <vector>

#include "mdset/arith.hpp"
#include "mdset/set_core.hpp"

namespace mdset {

// One instance of the rectangle mass-transference lower-bound machinery:
// per-coordinate regularity exponents delta, shrinking exponents a (outer)
// and t (extra), and the local scaling parameter kappa.
struct MtpInstance {
    std::vector<double> delta; // > 0
    std::vector<double> a;     // > 0
    std::vector<double> t;     // >= 0
    double kappa = 0.0;        // in [0, 1)

    int dim() const { return static_cast<int>(delta.size()); }
    void validate() const;
};

// The candidate levels {a_i} U {a_i + t_i}, sorted, exact-duplicate-free.
std::vector<double> candidate_set(const MtpInstance& inst);

// Index partition at a candidate level A:
//   k1 = {k : a_k >= A},   k2 = {k : a_k + t_k <= A} \ k1,   k3 = the rest.
struct MtpPartition {
    std::vector<int> k1, k2, k3; // 0-based, each index in exactly one list
};
MtpPartition partition_at(const MtpInstance& inst, double A);

// The dimension number at a candidate level A (throws invalid_argument_error
// when A is not in the candidate set):
//   sum_{k1} delta + sum_{k2} delta + kappa sum_{k3} delta
//     + (1-kappa) (sum_{k3} a_k delta_k - sum_{k2} t_k delta_k) / A.
double dimension_number(const MtpInstance& inst, double A);

struct MtpMin {
    double value = 0;
    std::vector<double> argmin_A;    // candidates attaining the min (1e-12 window)
    std::vector<double> candidates;  // the full candidate set
    std::vector<double> per_A;       // dimension number per candidate
};

// min over the candidate set.
MtpMin min_dimension_number(const MtpInstance& inst);

// Builds the point-target instance for a product set (delta_i = coordinate
// dimensions, a = 1, kappa = 0) and checks that the candidate minimum equals
// the closed-form weighted dimension, including argmin correspondence:
// A = 1 in the argmin iff some zero-weight coordinate attains the closed-form
// min; A = 1 + t_k in the argmin iff coordinate k does.
struct EquivReport {
    bool pass = false;
    double formula_value = 0;
    double mtp_value = 0;
    bool values_match = false;
    bool argmin_match = false;
};
EquivReport closed_form_equiv(const ProductSet& ps, const std::vector<double>& t,
                              double tol = 1e-12);

// Empirical read of the local scaling exponents: for each coordinate, fits
// log mass(B(x, r) ∩ B(x, eps)) ~ p log r + q log eps over sampled centers
// and scale grids. Point targets should show p ≈ 0 (no r contribution) and
// q ≈ the coordinate dimension.
struct ScalingProbeCoord {
    double r_exponent = 0;   // p
    double eps_exponent = 0; // q
};
struct ScalingProbeReport {
    std::vector<ScalingProbeCoord> coords;
    int samples = 0;
};
ScalingProbeReport kappa_scaling_probe(const ProductSet& ps, int samples,
                                       const std::vector<Rational>& scales, std::uint64_t seed);

} // namespace mdset
