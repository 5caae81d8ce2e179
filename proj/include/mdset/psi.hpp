#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mdset/error.hpp"

namespace mdset {

// Approximation speed on the b-power lattice. Families:
//   power(c):        psi(q) = q^-c
//   powerlog(c, e):  psi(q) = q^-c * (log_b q)^-e
//   table:           explicit (n, psi(b^n)) samples, no formula attached
// The normalized form phi(n) = b^n * psi(b^n) drives all monotonicity and
// series questions.
struct PsiSpec {
    enum class Family { power, powerlog, table };

    Family family = Family::power;
    double c = 1.0;
    double e = 0.0;
    std::vector<std::pair<int, double>> table; // strictly increasing n >= 1, positive values

    static PsiSpec make_power(double c);
    static PsiSpec make_powerlog(double c, double e);
    static PsiSpec make_table(std::vector<std::pair<int, double>> rows);

    void validate() const;
    bool is_formula() const { return family != Family::table; }
};

// ln psi(b^n); n >= 1. Table specs only answer at listed n.
double log_psi(const PsiSpec& spec, int base, int n);
double psi_value(const PsiSpec& spec, int base, int n);

// ln phi(n) = n ln b + ln psi(b^n). Exactly 0 for power(1).
double log_normalized(const PsiSpec& spec, int base, int n);

// The n grid a spec can be evaluated on, clipped to [1, n_max].
std::vector<int> evaluation_grid(const PsiSpec& spec, int n_max);

struct MonotoneReport {
    bool pass = true;
    int fail_n = -1; // first n with phi(next) > phi(n)
    int checked = 0;
};

// Verifies phi is non-increasing across the evaluation grid.
MonotoneReport monotone_check(const PsiSpec& spec, int base, int n_max);

enum class SeriesVerdict { divergent, convergent, inconclusive };

// Classification of sum_n phi(n)^s for s >= 0. Formula families get the
// symbolic comparison-test answer; tables are inconclusive (except s = 0).
// Boundary comparisons carry 1e-12 relative slack so exact-boundary inputs
// (e.g. e*s = 1) land on the boundary branch.
SeriesVerdict classify_series(const PsiSpec& spec, int base, double s);

enum class ProofVerdict { proved, refuted, sampled_only };

struct TailConditionReport {
    ProofVerdict overall = ProofVerdict::sampled_only;
    std::vector<std::pair<double, SeriesVerdict>> per_eps;
};

// Decides whether sum_n (b^n psi(b^n)^(1+eps))^gamma converges for EVERY
// eps > 0: symbolic proof/refutation for formula families, numeric trend
// fits per listed eps for tables. eps entries must be positive.
TailConditionReport tail_condition_check(const PsiSpec& spec, int base, double gamma,
                                         const std::vector<double>& eps_list);

enum class VolumeVerdict { zero, full, inconclusive };

// Borel-Cantelli volume-sum dichotomy for d-dimensional Euclidean targets
// with per-coordinate speeds: zero iff sum_q q^d * prod_i psi_i(q)
// converges. Only formula families can be decided.
VolumeVerdict volume_sum_classifier(int d, const std::vector<PsiSpec>& specs);

// Pointwise product of two speeds. Formula x formula stays a formula;
// anything involving a table becomes a table on the evaluable grid.
PsiSpec product(const PsiSpec& a, const PsiSpec& b, int base = 3, int n_max = 64);

} // namespace mdset
