#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdset/set_core.hpp"

namespace mdset {

// Exact mass bracket. lower <= true mass <= upper, with equality when the
// region resolves exactly at the requested depth.
struct MassInterval {
    Rational lower, upper;
};

// Which route computes a mass: descend the branch tree of the product set,
// or multiply per-coordinate masses. The two agree exactly; keeping both is
// the point (it is the checkable face of the product-measure identity).
enum class MeasureMode { self_similar, product };

// Natural measure of a cylinder: branch_count^-|word|, exact.
Rational cylinder_mass(const ProductSet& ps, const Word& w);

// Bracket for the mass of one coordinate factor inside the closed interval
// [lo, hi], resolved to the given depth. Cylinders strictly outside are
// dropped; cylinders fully inside count toward both ends; unresolved
// boundary cylinders at the depth cap count toward the upper end only.
MassInterval interval_mass(const DigitSet& ds, const Rational& lo, const Rational& hi, int depth);

// Bracket for the mass of the closed sup-norm ball B(center, radius).
// Cylinders touching the sphere from outside land in the upper end only, so
// the bracket is honest for the closed ball (and still an upper/lower pair
// for the open one).
MassInterval ball_mass(const ProductSet& ps, const std::vector<Rational>& center,
                       const Rational& radius, int depth,
                       MeasureMode mode = MeasureMode::self_similar);

struct AhlforsReport {
    double c1 = 0, c2 = 0; // empirical bounds for mass / r^gamma
    int samples = 0;
};

// Samples random centers in the set and log-uniform radii in [r_min, r_max],
// returning the observed range of mass(B(x,r)) / r^gamma. For a sound
// measure the ratios stay inside fixed positive constants.
AhlforsReport ahlfors_check(const ProductSet& ps, int samples, const Rational& r_min,
                            const Rational& r_max, std::uint64_t seed);

struct CheckReport {
    std::uint64_t checked = 0;
    bool pass = true;
    std::string counterexample; // empty when pass
};

// Verifies mu(F) = sum_j weight * mu(g_j^-1 F) exactly on every cylinder of
// level <= max_level. weight defaults to 1/branch_count (the invariant
// weight); passing anything else is the deliberate-failure entry point.
CheckReport invariance_check(const ProductSet& ps, int max_level);
CheckReport invariance_check_weighted(const ProductSet& ps, int max_level, const Rational& weight);

// Verifies that the product-route mass of every rectangle built from
// per-coordinate cylinders (all level combinations <= max_level) equals the
// branch-tree mass, exactly.
CheckReport product_equals_selfsimilar(const ProductSet& ps, int max_level);

// Exact check that level-n cylinder masses sum to 1 for n <= max_level.
CheckReport mass_partition_check(const ProductSet& ps, int max_level);

} // namespace mdset
