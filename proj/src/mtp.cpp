#include "mdset/mtp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mdset/dim_formulas.hpp"
#include "mdset/measure.hpp"
#include "mdset/rng.hpp"

namespace mdset {

void MtpInstance::validate() const {
    const auto d = delta.size();
    if (d == 0) throw invalid_argument_error("mtp: need at least one coordinate");
    if (a.size() != d || t.size() != d)
        throw invalid_argument_error("mtp: delta, a, t must have equal arity");
    for (double v : delta)
        if (!(v > 0) || !std::isfinite(v))
            throw invalid_argument_error("mtp: regularity exponents must be positive");
    for (double v : a)
        if (!(v > 0) || !std::isfinite(v))
            throw invalid_argument_error("mtp: outer exponents must be positive");
    for (double v : t)
        if (!(v >= 0) || !std::isfinite(v))
            throw invalid_argument_error("mtp: extra exponents must be >= 0");
    if (!(kappa >= 0) || !(kappa < 1))
        throw invalid_argument_error("mtp: kappa must lie in [0, 1)");
}

std::vector<double> candidate_set(const MtpInstance& inst) {
    inst.validate();
    std::vector<double> cand;
    cand.reserve(2 * inst.delta.size());
    for (std::size_t i = 0; i < inst.a.size(); ++i) {
        cand.push_back(inst.a[i]);
        cand.push_back(inst.a[i] + inst.t[i]);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    return cand;
}

namespace {

bool near(double x, double y, double tol = kArgminTol) { return std::abs(x - y) <= tol; }

bool is_candidate(const MtpInstance& inst, double A) {
    for (double c : candidate_set(inst))
        if (near(c, A)) return true;
    return false;
}

} // namespace

MtpPartition partition_at(const MtpInstance& inst, double A) {
    inst.validate();
    if (!is_candidate(inst, A))
        throw invalid_argument_error("mtp: level is not in the candidate set");
    MtpPartition part;
    const int d = inst.dim();
    for (int k = 0; k < d; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        if (inst.a[uk] >= A) part.k1.push_back(k);
        else if (inst.a[uk] + inst.t[uk] <= A) part.k2.push_back(k);
        else part.k3.push_back(k);
    }
    // the three lists partition {0..d-1} by construction; keep the guarantee hot
    if (part.k1.size() + part.k2.size() + part.k3.size() != static_cast<std::size_t>(d))
        throw error("mtp: partition invariant violated");
    return part;
}

double dimension_number(const MtpInstance& inst, double A) {
    const MtpPartition part = partition_at(inst, A);
    double s = 0;
    for (int k : part.k1) s += inst.delta[static_cast<std::size_t>(k)];
    for (int k : part.k2) s += inst.delta[static_cast<std::size_t>(k)];
    for (int k : part.k3) s += inst.kappa * inst.delta[static_cast<std::size_t>(k)];
    double corr = 0;
    for (int k : part.k3) {
        const auto uk = static_cast<std::size_t>(k);
        corr += inst.a[uk] * inst.delta[uk];
    }
    for (int k : part.k2) {
        const auto uk = static_cast<std::size_t>(k);
        corr -= inst.t[uk] * inst.delta[uk];
    }
    return s + (1.0 - inst.kappa) * corr / A;
}

MtpMin min_dimension_number(const MtpInstance& inst) {
    MtpMin out;
    out.candidates = candidate_set(inst);
    out.per_A.reserve(out.candidates.size());
    for (double A : out.candidates) out.per_A.push_back(dimension_number(inst, A));
    out.value = *std::min_element(out.per_A.begin(), out.per_A.end());
    for (std::size_t i = 0; i < out.candidates.size(); ++i)
        if (out.per_A[i] <= out.value + kArgminTol) out.argmin_A.push_back(out.candidates[i]);
    return out;
}

EquivReport closed_form_equiv(const ProductSet& ps, const std::vector<double>& t, double tol) {
    ps.validate();
    const int d = ps.dim();
    validate_weights(d, t);

    MtpInstance inst;
    inst.t = t;
    inst.kappa = 0.0;
    for (int i = 0; i < d; ++i) {
        inst.delta.push_back(dim_coordinate(ps.coords[static_cast<std::size_t>(i)]));
        inst.a.push_back(1.0);
    }

    const DimBreakdown closed = weighted_dim(ps, t);
    const MtpMin mtp = min_dimension_number(inst);

    EquivReport rep;
    rep.formula_value = closed.value;
    rep.mtp_value = mtp.value;
    rep.values_match = std::abs(closed.value - mtp.value) <= tol;

    const auto argmin_has = [&](double A) {
        return std::any_of(mtp.argmin_A.begin(), mtp.argmin_A.end(),
                           [&](double c) { return near(c, A, tol); });
    };
    bool ok = true;
    // every closed-form argmin coordinate shows up as its candidate level
    for (int k : closed.argmin)
        if (!argmin_has(1.0 + t[static_cast<std::size_t>(k)])) ok = false;
    // every minimizing level corresponds to a minimizing coordinate
    for (double A : mtp.argmin_A) {
        bool matched = false;
        for (int k : closed.argmin) {
            const double tk = t[static_cast<std::size_t>(k)];
            if (near(1.0 + tk, A, tol)) matched = true;
        }
        if (near(A, 1.0, tol)) {
            // the base level minimizes iff a zero-weight coordinate does
            bool zero_min = false;
            for (int k : closed.argmin)
                if (t[static_cast<std::size_t>(k)] == 0.0) zero_min = true;
            matched = zero_min;
        }
        if (!matched) ok = false;
    }
    rep.argmin_match = ok;
    rep.pass = rep.values_match && rep.argmin_match;
    return rep;
}

namespace {

// least squares for y = b0 + b1*x1 + b2*x2 (normal equations, 3x3 Cramer)
std::array<double, 3> fit_plane(const std::vector<std::array<double, 3>>& rows) {
    double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, sz = 0, sxz = 0, syz = 0;
    for (const auto& r : rows) {
        const double x = r[0], y = r[1], z = r[2];
        s1 += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sz += z;
        sxz += x * z;
        syz += y * z;
    }
    const auto det3 = [](double a, double b, double c, double d, double e, double f, double g,
                         double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
    };
    const double D = det3(s1, sx, sy, sx, sxx, sxy, sy, sxy, syy);
    if (std::abs(D) < 1e-12) throw invalid_argument_error("scaling probe: degenerate scale grid");
    const double b0 = det3(sz, sx, sy, sxz, sxx, sxy, syz, sxy, syy) / D;
    const double b1 = det3(s1, sz, sy, sx, sxz, sxy, sy, syz, syy) / D;
    const double b2 = det3(s1, sx, sz, sx, sxx, sxz, sy, sxy, syz) / D;
    return {b0, b1, b2};
}

} // namespace

ScalingProbeReport kappa_scaling_probe(const ProductSet& ps, int samples,
                                       const std::vector<Rational>& scales, std::uint64_t seed) {
    ps.validate();
    if (samples < 1) throw invalid_argument_error("scaling probe: need at least one sample");
    if (scales.size() < 2)
        throw invalid_argument_error("scaling probe: need at least two scales");
    for (const auto& s : scales)
        if (!(s > 0)) throw invalid_argument_error("scaling probe: scales must be positive");
    Rational smallest = scales.front();
    for (const auto& s : scales) smallest = std::min(smallest, s);

    const double logb = std::log(static_cast<double>(ps.base));
    const int deepest =
        static_cast<int>(std::ceil(-std::log(to_double(smallest)) / logb)) + 3;

    Rng rng(seed);
    ScalingProbeReport rep;
    rep.samples = samples;
    const int d = ps.dim();
    for (int i = 0; i < d; ++i) {
        const auto& ds = ps.coords[static_cast<std::size_t>(i)];
        std::vector<std::array<double, 3>> rows;
        for (int s = 0; s < samples; ++s) {
            CoordDigits cd;
            for (int k = 0; k < deepest + 2; ++k)
                cd.prefix.push_back(
                    ds.digits[static_cast<std::size_t>(uniform_int(rng, 0, ds.count() - 1))]);
            cd.period = {ds.min_digit()};
            const Rational x = coord_value(cd, ps.base);

            // the target is a point, so the (r, eps) intersection mass is the
            // eps-ball mass whenever eps < r; sample all such pairs
            std::vector<double> masses(scales.size());
            for (std::size_t e = 0; e < scales.size(); ++e) {
                const int depth =
                    static_cast<int>(std::ceil(-std::log(to_double(scales[e])) / logb)) + 3;
                const auto mi = interval_mass(ds, x - scales[e], x + scales[e], depth);
                masses[e] = 0.5 * (to_double(mi.lower) + to_double(mi.upper));
            }
            for (std::size_t j = 0; j < scales.size(); ++j) {
                const Rational r = scales[j] * 2;
                for (std::size_t e = 0; e < scales.size(); ++e) {
                    if (!(scales[e] < r)) continue;
                    rows.push_back({std::log(to_double(r)), std::log(to_double(scales[e])),
                                    std::log(masses[e])});
                }
            }
        }
        const auto fit = fit_plane(rows);
        rep.coords.push_back(ScalingProbeCoord{fit[1], fit[2]});
    }
    return rep;
}

} // namespace mdset
