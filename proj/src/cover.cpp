#include "mdset/cover.hpp"

#include <algorithm>
#include <cmath>

#include "mdset/dim_formulas.hpp"

namespace mdset {

namespace {

// ceil with a snap window so sandwich boundaries that are exact in real
// arithmetic land on their integer despite binary64 noise
long long snap_ceil(double r) { return static_cast<long long>(std::ceil(r - 1e-9)); }

double checked_log_psi(const PsiSpec& psi, int base, unsigned n) {
    const double lp = log_psi(psi, base, static_cast<int>(n));
    if (!(lp < 0)) throw invalid_argument_error("cover: speed must be < 1 at this generation");
    return lp;
}

} // namespace

std::vector<GenRect> generation_rectangles(const ProductSet& ps, const PointDigits& x,
                                           const PsiSpec& psi, const std::vector<double>& t,
                                           unsigned n) {
    ps.validate();
    validate_point(ps, x);
    validate_weights(ps.dim(), t);
    const auto d = static_cast<std::size_t>(ps.dim());

    std::vector<double> half(d);
    if (n == 0) {
        if (psi.family != PsiSpec::Family::power)
            throw invalid_argument_error("cover: generation 0 needs a speed defined at scale 1");
        std::fill(half.begin(), half.end(), 1.0);
    } else {
        const double lp = checked_log_psi(psi, ps.base, n);
        for (std::size_t j = 0; j < d; ++j) half[j] = std::exp((1 + t[j]) * lp);
    }

    const std::uint64_t total = checked_word_count(ps, n);
    const std::uint64_t N = ps.branch_count();
    std::vector<GenRect> out;
    out.reserve(total);
    Word w(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t rem = idx;
        for (unsigned pos = n; pos-- > 0;) {
            w[pos] = rem % N;
            rem /= N;
        }
        out.push_back(GenRect{point_value(ps, apply_word(ps, w, x)), half});
    }
    return out;
}

long long coarse_level(const PsiSpec& psi, int base, double t_j, unsigned n) {
    if (!(t_j >= 0) || !std::isfinite(t_j))
        throw invalid_argument_error("cover: weights must be finite and >= 0");
    if (n == 0) throw invalid_argument_error("cover: scale exponents need generation >= 1");
    const double lp = checked_log_psi(psi, base, n);
    const double logb = std::log(static_cast<double>(base));
    return snap_ceil(-(std::log(2.0) + (1 + t_j) * lp) / logb);
}

CoverLevels cover_levels(const PsiSpec& psi, int base, double t_j, double t_k, unsigned n) {
    if (!(t_k >= 0) || !std::isfinite(t_k))
        throw invalid_argument_error("cover: weights must be finite and >= 0");
    if (!(t_j < t_k)) throw invalid_argument_error("cover: refinement needs t_j < t_k");
    const long long u = coarse_level(psi, base, t_j, n);
    const double lp = checked_log_psi(psi, base, n);
    const double logb = std::log(static_cast<double>(base));
    const long long uv = snap_ceil(-(1 + t_k) * lp / logb);
    if (uv < u) throw error("cover: scale ladder inverted"); // unreachable for psi < 1
    return {u, uv - u};
}

CoverCount cover_count_bound(const ProductSet& ps, const PsiSpec& psi,
                             const std::vector<double>& t, unsigned n, std::size_t j,
                             std::size_t k) {
    ps.validate();
    validate_weights(ps.dim(), t);
    if (j >= t.size() || k >= t.size())
        throw invalid_argument_error("cover: coordinate index out of range");

    CoverCount out;
    if (t[j] >= t[k]) {
        checked_log_psi(psi, ps.base, n); // still demand a usable scale
        return out;
    }

    const auto lv = cover_levels(psi, ps.base, t[j], t[k], n);
    if (lv.v > kRefineGuard) throw guard_error("cover: refinement exponent exceeds guard");
    const auto& ds = ps.coords[j];
    const double lp = log_psi(psi, ps.base, static_cast<int>(n));
    const double gj = dim_coordinate(ds);
    const double logb = std::log(static_cast<double>(ps.base));
    const double log2 = std::log(2.0);

    out.refined = true;
    out.count = 2 * ipow(BigInt(ds.count()), static_cast<unsigned>(lv.v));
    out.log_count = log2 + static_cast<double>(lv.v) * std::log(static_cast<double>(ds.count()));
    out.log_refined_bound =
        log2 + gj * ((1.0 - static_cast<double>(lv.u)) * logb - (1 + t[k]) * lp);
    out.log_closed_bound = (1 + gj) * log2 + gj * logb + gj * (t[j] - t[k]) * lp;
    return out;
}

UpperSumReport upper_sum(const ProductSet& ps, const PsiSpec& psi, const std::vector<double>& t,
                         std::size_t k, double s, int n0, int n_max, CoverBoundMode mode) {
    ps.validate();
    validate_weights(ps.dim(), t);
    if (k >= t.size()) throw invalid_argument_error("cover: coordinate index out of range");
    if (!(s >= 0) || !std::isfinite(s))
        throw invalid_argument_error("cover: exponent must be finite and >= 0");
    if (n0 < 1 || n_max < n0) throw invalid_argument_error("cover: need 1 <= n0 <= n_max");

    const double logN = std::log(static_cast<double>(ps.branch_count()));
    UpperSumReport rep;
    rep.log_terms.reserve(static_cast<std::size_t>(n_max - n0 + 1));
    for (int n = n0; n <= n_max; ++n) {
        const double lp = checked_log_psi(psi, ps.base, static_cast<unsigned>(n));
        double lt = s * (1 + t[k]) * lp + n * logN;
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (!(t[j] < t[k])) continue;
            const auto cc = cover_count_bound(ps, psi, t, static_cast<unsigned>(n), j, k);
            lt += mode == CoverBoundMode::exact_count ? cc.log_count : cc.log_closed_bound;
        }
        rep.log_terms.emplace_back(n, lt);
    }

    double peak = rep.log_terms.front().second;
    for (const auto& [gen, lt] : rep.log_terms) peak = std::max(peak, lt);
    double sum = 0, comp = 0;
    for (const auto& [gen, lt] : rep.log_terms) {
        const double y = std::exp(lt - peak) - comp;
        const double tmp = sum + y;
        comp = (tmp - sum) - y;
        sum = tmp;
    }
    rep.log_sum = peak + std::log(sum);
    rep.log_first = rep.log_terms.front().second;
    rep.log_last = rep.log_terms.back().second;
    return rep;
}

double s0_threshold(const ProductSet& ps, const std::vector<double>& t, std::size_t k) {
    ps.validate();
    validate_weights(ps.dim(), t);
    if (k >= t.size()) throw invalid_argument_error("cover: coordinate index out of range");
    double acc = dim_product(ps);
    for (std::size_t j = 0; j < t.size(); ++j)
        if (t[j] < t[k]) acc += (t[k] - t[j]) * dim_coordinate(ps.coords[j]);
    return acc / (1 + t[k]);
}

int first_generation_below(const PsiSpec& psi, int base, double t_k, double rho) {
    psi.validate();
    if (!(t_k >= 0) || !std::isfinite(t_k))
        throw invalid_argument_error("cover: weights must be finite and >= 0");
    if (!(rho > 0) || !std::isfinite(rho))
        throw invalid_argument_error("cover: rho must be positive and finite");
    const double target = std::log(rho) + 1e-12; // slack admits exact-boundary scales
    if (psi.is_formula()) {
        for (int n = 1; n <= kScanGuard; ++n)
            if ((1 + t_k) * log_psi(psi, base, n) <= target) return n;
        throw guard_error("cover: target scale not reached within the scan guard");
    }
    for (const auto& [n, value] : psi.table)
        if ((1 + t_k) * log_psi(psi, base, n) <= target) return n;
    throw error("cover: listed scales never reach the target");
}

} // namespace mdset
