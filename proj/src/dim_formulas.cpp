#include "mdset/dim_formulas.hpp"

#include <cmath>
#include <numeric>

namespace mdset {

void validate_weights(int d, const std::vector<double>& t) {
    if (static_cast<int>(t.size()) != d)
        throw invalid_argument_error("weights: arity does not match the coordinate count");
    for (double ti : t)
        if (!std::isfinite(ti) || ti < 0)
            throw invalid_argument_error("weights: entries must be finite and >= 0");
}

namespace {

DimBreakdown minimize(std::vector<double> per_k) {
    DimBreakdown out;
    out.per_k = std::move(per_k);
    out.value = out.per_k.front();
    for (double v : out.per_k) out.value = std::min(out.value, v);
    for (int k = 0; k < static_cast<int>(out.per_k.size()); ++k)
        if (out.per_k[static_cast<std::size_t>(k)] <= out.value + kArgminTol)
            out.argmin.push_back(k);
    return out;
}

} // namespace

DimBreakdown weighted_dim(const ProductSet& ps, const std::vector<double>& t) {
    ps.validate();
    const int d = ps.dim();
    validate_weights(d, t);
    std::vector<double> g(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i)] = dim_coordinate(ps.coords[static_cast<std::size_t>(i)]);
    const double gamma = std::accumulate(g.begin(), g.end(), 0.0);

    std::vector<double> per_k(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double tk = t[static_cast<std::size_t>(k)];
        double surplus = 0;
        for (int j = 0; j < d; ++j)
            if (t[static_cast<std::size_t>(j)] <= tk)
                surplus += (tk - t[static_cast<std::size_t>(j)]) * g[static_cast<std::size_t>(j)];
        per_k[static_cast<std::size_t>(k)] = (gamma + surplus) / (1.0 + tk);
    }
    return minimize(std::move(per_k));
}

DimBreakdown euclidean_weighted_dim(int d, const std::vector<double>& t) {
    if (d < 1) throw invalid_argument_error("euclidean dim: need d >= 1");
    validate_weights(d, t);
    const double tsum = std::accumulate(t.begin(), t.end(), 0.0);
    if (tsum < 1.0)
        throw invalid_argument_error("euclidean dim: formula requires sum of weights >= 1");

    std::vector<double> per_k(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double tk = t[static_cast<std::size_t>(k)];
        double surplus = 0;
        for (int i = 0; i < d; ++i)
            if (tk >= t[static_cast<std::size_t>(i)]) surplus += tk - t[static_cast<std::size_t>(i)];
        per_k[static_cast<std::size_t>(k)] = (d + 1 + surplus) / (1.0 + tk);
    }
    return minimize(std::move(per_k));
}

} // namespace mdset
