#include "mdset/psi.hpp"

#include <algorithm>
#include <cmath>

namespace mdset {

namespace {

constexpr double kBoundaryTol = 1e-12;

// a vs b with relative slack: negative / zero (boundary) / positive
int slack_compare(double a, double b) {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    if (a < b - kBoundaryTol * scale) return -1;
    if (a > b + kBoundaryTol * scale) return 1;
    return 0;
}

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace

PsiSpec PsiSpec::make_power(double c) {
    PsiSpec s;
    s.family = Family::power;
    s.c = c;
    s.validate();
    return s;
}

PsiSpec PsiSpec::make_powerlog(double c, double e) {
    PsiSpec s;
    s.family = Family::powerlog;
    s.c = c;
    s.e = e;
    s.validate();
    return s;
}

PsiSpec PsiSpec::make_table(std::vector<std::pair<int, double>> rows) {
    PsiSpec s;
    s.family = Family::table;
    s.table = std::move(rows);
    s.validate();
    return s;
}

void PsiSpec::validate() const {
    switch (family) {
    case Family::power:
    case Family::powerlog:
        if (!(c > 0) || !std::isfinite(c))
            throw invalid_argument_error("psi: power exponent c must be positive and finite");
        if (!std::isfinite(e))
            throw invalid_argument_error("psi: log exponent must be finite");
        break;
    case Family::table:
        if (table.empty()) throw invalid_argument_error("psi: empty table");
        for (std::size_t i = 0; i < table.size(); ++i) {
            if (table[i].first < 1)
                throw invalid_argument_error("psi: table indices must be >= 1");
            if (i > 0 && table[i].first <= table[i - 1].first)
                throw invalid_argument_error("psi: table indices must be strictly increasing");
            if (!(table[i].second > 0) || !std::isfinite(table[i].second))
                throw invalid_argument_error("psi: table values must be positive and finite");
        }
        break;
    }
}

double log_psi(const PsiSpec& spec, int base, int n) {
    spec.validate();
    if (base < 2) throw invalid_argument_error("psi: base must be >= 2");
    if (n < 1) throw invalid_argument_error("psi: n must be >= 1");
    const double nlogb = static_cast<double>(n) * std::log(static_cast<double>(base));
    switch (spec.family) {
    case PsiSpec::Family::power:
        return -spec.c * nlogb;
    case PsiSpec::Family::powerlog:
        return -spec.c * nlogb - spec.e * std::log(static_cast<double>(n));
    case PsiSpec::Family::table: {
        const auto it = std::lower_bound(
            spec.table.begin(), spec.table.end(), n,
            [](const std::pair<int, double>& row, int key) { return row.first < key; });
        if (it == spec.table.end() || it->first != n)
            throw invalid_argument_error("psi: table has no entry at requested n");
        return std::log(it->second);
    }
    }
    throw invalid_argument_error("psi: unknown family");
}

double psi_value(const PsiSpec& spec, int base, int n) { return std::exp(log_psi(spec, base, n)); }

double log_normalized(const PsiSpec& spec, int base, int n) {
    const double nlogb = static_cast<double>(n) * std::log(static_cast<double>(base));
    return nlogb + log_psi(spec, base, n);
}

std::vector<int> evaluation_grid(const PsiSpec& spec, int n_max) {
    std::vector<int> grid;
    if (spec.family == PsiSpec::Family::table) {
        for (const auto& [n, v] : spec.table) {
            (void)v;
            if (n <= n_max) grid.push_back(n);
        }
    } else {
        for (int n = 1; n <= n_max; ++n) grid.push_back(n);
    }
    return grid;
}

MonotoneReport monotone_check(const PsiSpec& spec, int base, int n_max) {
    spec.validate();
    const auto grid = evaluation_grid(spec, n_max);
    MonotoneReport rep;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        ++rep.checked;
        if (log_normalized(spec, base, grid[i + 1]) > log_normalized(spec, base, grid[i])) {
            rep.pass = false;
            rep.fail_n = grid[i];
            return rep;
        }
    }
    return rep;
}

SeriesVerdict classify_series(const PsiSpec& spec, int base, double s) {
    spec.validate();
    if (base < 2) throw invalid_argument_error("psi: base must be >= 2");
    if (!(s >= 0) || !std::isfinite(s))
        throw invalid_argument_error("psi: series exponent must be >= 0 and finite");
    if (s == 0) return SeriesVerdict::divergent; // constant terms 1
    switch (spec.family) {
    case PsiSpec::Family::power: {
        // terms b^{n(1-c)s}
        const int cmp = slack_compare(spec.c, 1.0);
        return cmp <= 0 ? SeriesVerdict::divergent : SeriesVerdict::convergent;
    }
    case PsiSpec::Family::powerlog: {
        const int cmp = slack_compare(spec.c, 1.0);
        if (cmp < 0) return SeriesVerdict::divergent;
        if (cmp > 0) return SeriesVerdict::convergent;
        // terms n^{-e s}: p-series boundary
        return slack_compare(spec.e * s, 1.0) <= 0 ? SeriesVerdict::divergent
                                                   : SeriesVerdict::convergent;
    }
    case PsiSpec::Family::table:
        return SeriesVerdict::inconclusive;
    }
    return SeriesVerdict::inconclusive;
}

TailConditionReport tail_condition_check(const PsiSpec& spec, int base, double gamma,
                                         const std::vector<double>& eps_list) {
    spec.validate();
    if (!(gamma > 0) || !std::isfinite(gamma))
        throw invalid_argument_error("tail condition: gamma must be positive");
    if (eps_list.empty())
        throw invalid_argument_error("tail condition: eps grid must be nonempty");
    for (double eps : eps_list)
        if (!(eps > 0) || !std::isfinite(eps))
            throw invalid_argument_error("tail condition: eps values must be positive");

    TailConditionReport rep;
    if (spec.is_formula()) {
        // terms (b^n psi(b^n)^{1+eps})^gamma = b^{n gamma (1 - c(1+eps))} * n^{-e gamma (1+eps)}
        for (double eps : eps_list) {
            const int cmp = slack_compare(spec.c * (1.0 + eps), 1.0);
            SeriesVerdict v;
            if (cmp > 0) {
                v = SeriesVerdict::convergent;
            } else if (cmp < 0) {
                v = SeriesVerdict::divergent;
            } else {
                // geometric part is flat; the log factor decides (power: e = 0)
                const double p = spec.e * gamma * (1.0 + eps);
                v = slack_compare(p, 1.0) <= 0 ? SeriesVerdict::divergent
                                               : SeriesVerdict::convergent;
            }
            rep.per_eps.emplace_back(eps, v);
        }
        // For every eps > 0: c(1+eps) > 1 iff c >= 1 (strictly beyond the
        // boundary for small eps iff c >= 1).
        rep.overall = slack_compare(spec.c, 1.0) >= 0 ? ProofVerdict::proved
                                                      : ProofVerdict::refuted;
        return rep;
    }

    // Table: trend-fit ln T_n on the last half of the grid for each eps.
    rep.overall = ProofVerdict::sampled_only;
    const double logb = std::log(static_cast<double>(base));
    for (double eps : eps_list) {
        std::vector<double> xs, ys;
        for (const auto& [n, v] : spec.table) {
            xs.push_back(static_cast<double>(n));
            ys.push_back(gamma * (n * logb + (1.0 + eps) * std::log(v)));
        }
        const std::size_t half = xs.size() / 2;
        std::vector<double> xt(xs.begin() + static_cast<std::ptrdiff_t>(half), xs.end());
        std::vector<double> yt(ys.begin() + static_cast<std::ptrdiff_t>(half), ys.end());
        SeriesVerdict v = SeriesVerdict::inconclusive;
        if (xt.size() >= 3) {
            const double slope = fit_slope(xt, yt);
            if (slope < -0.05) v = SeriesVerdict::convergent;
            else if (slope > 0.05) v = SeriesVerdict::divergent;
        }
        rep.per_eps.emplace_back(eps, v);
    }
    return rep;
}

VolumeVerdict volume_sum_classifier(int d, const std::vector<PsiSpec>& specs) {
    if (d < 1) throw invalid_argument_error("volume sum: dimension must be >= 1");
    if (static_cast<int>(specs.size()) != d)
        throw invalid_argument_error("volume sum: need one speed per coordinate");
    double csum = 0, esum = 0;
    for (const auto& s : specs) {
        s.validate();
        if (!s.is_formula()) return VolumeVerdict::inconclusive;
        csum += s.c;
        if (s.family == PsiSpec::Family::powerlog) esum += s.e;
    }
    // sum_q q^{d - csum} (log q)^{-esum}
    const int cmp = slack_compare(static_cast<double>(d) - csum, -1.0);
    if (cmp > 0) return VolumeVerdict::full;
    if (cmp < 0) return VolumeVerdict::zero;
    return slack_compare(esum, 1.0) <= 0 ? VolumeVerdict::full : VolumeVerdict::zero;
}

PsiSpec product(const PsiSpec& a, const PsiSpec& b, int base, int n_max) {
    a.validate();
    b.validate();
    if (a.is_formula() && b.is_formula()) {
        if (a.family == PsiSpec::Family::power && b.family == PsiSpec::Family::power)
            return PsiSpec::make_power(a.c + b.c);
        return PsiSpec::make_powerlog(a.c + b.c, a.e + b.e);
    }
    // grids intersect; sample the product there
    std::vector<std::pair<int, double>> rows;
    const auto ga = evaluation_grid(a, n_max);
    const auto gb = evaluation_grid(b, n_max);
    std::vector<int> common;
    std::set_intersection(ga.begin(), ga.end(), gb.begin(), gb.end(), std::back_inserter(common));
    if (common.empty())
        throw invalid_argument_error("psi product: no common evaluation points");
    rows.reserve(common.size());
    for (int n : common)
        rows.emplace_back(n, std::exp(log_psi(a, base, n) + log_psi(b, base, n)));
    return PsiSpec::make_table(std::move(rows));
}

} // namespace mdset
