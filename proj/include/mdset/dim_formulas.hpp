#pragma once

#include <vector>

#include "mdset/set_core.hpp"

namespace mdset {

// Result of a min-over-coordinates dimension formula.
struct DimBreakdown {
    double value = 0;            // the minimum
    std::vector<int> argmin;     // 0-based coordinates attaining it (1e-12 window)
    std::vector<double> per_k;   // candidate value for each coordinate
};

// Tolerance for collecting ties into the argmin set.
inline constexpr double kArgminTol = 1e-12;

// Throws invalid_argument_error unless every weight is finite and >= 0 and
// the arity matches d.
void validate_weights(int d, const std::vector<double>& t);

// Hausdorff dimension of the weighted inhomogeneous target inside the
// product set:
//   min over k of (gamma + sum_{j: t_j <= t_k} (t_k - t_j) gamma_j) / (1 + t_k).
DimBreakdown weighted_dim(const ProductSet& ps, const std::vector<double>& t);

// The Euclidean analogue (full space, Lebesgue setting):
//   min over k of (d + 1 + sum_{i: t_k >= t_i} (t_k - t_i)) / (1 + t_k),
// valid only when sum t_i >= 1 (throws invalid_argument_error otherwise).
DimBreakdown euclidean_weighted_dim(int d, const std::vector<double>& t);

} // namespace mdset
