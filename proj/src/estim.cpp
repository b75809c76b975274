#include "ofbm/estim.hpp"

#include <cmath>
#include <string>

#include "ofbm/matfun.hpp"

namespace ofbm {

int ScalePlan::octave() const {
    int oct = j_base;
    for (std::int64_t v = a; v > 1; v /= 2) ++oct;
    return oct;
}

ScalePlan choose_scale(std::int64_t nu, int j_base) {
    ScalePlan plan;
    plan.nu = nu;
    plan.j_base = j_base;
    plan.a = 1;
    while (nu / ((plan.a * 2) << j_base) >= 8) plan.a *= 2;
    return plan;
}

namespace {

ScaleEstimate estimate_octave(const OctaveVariance& ov, double scale) {
    const int n = ov.w.rows();
    ScaleEstimate est;
    est.scale = scale;
    est.count = ov.count;

    if (n == 2) {
        const auto e = sym_eig2(ov.w);
        est.lambda = {e.lambda1, e.lambda2};
        est.eigenvectors = Mat(2, 2, {e.v1[0], e.v2[0], e.v1[1], e.v2[1]});
    } else {
        auto e = sym_eig_n(ov.w);
        est.lambda = std::move(e.values);
        est.eigenvectors = std::move(e.vectors);
    }

    const double denom = 2.0 * std::log(scale);
    for (double lam : est.lambda) {
        if (!(lam > 0.0))
            throw NonPositiveEigenvalue(
                "sample wavelet variance has a non-positive eigenvalue at scale " +
                    std::to_string(scale),
                scale);
        est.h_hat.push_back(std::log(lam) / denom);
    }

    if (n == 2) {
        const double b = ov.w(0, 1);
        if (b != 0.0) {
            est.theta_hat = (est.lambda[0] - ov.w(0, 0)) / b;
            est.theta_valid = true;
        }
    }
    return est;
}

const OctaveVariance& octave_for_plan(const WaveletVariance& wv, const ScalePlan& plan) {
    const int oct = plan.octave();
    const OctaveVariance* ov = wv.find(oct);
    if (!ov)
        throw InsufficientData("wavelet variance has no octave " + std::to_string(oct), oct);
    if (ov->count < 2)
        throw InsufficientData("octave " + std::to_string(oct) + " has fewer than 2 coefficients",
                               oct);
    return *ov;
}

} // namespace

ScaleEstimate estimate_at(const WaveletVariance& wv, const ScalePlan& plan) {
    return estimate_octave(octave_for_plan(wv, plan), plan.scale());
}

EigenEstimates estimate_h(const WaveletVariance& wv) {
    EigenEstimates out;
    out.n = wv.n;
    for (const auto& ov : wv.octaves) {
        if (ov.octave < 1) continue;
        try {
            out.per_scale.push_back(estimate_octave(ov, std::ldexp(1.0, ov.octave)));
        } catch (const Error& e) {
            ScaleEstimate flagged;
            flagged.scale = std::ldexp(1.0, ov.octave);
            flagged.count = ov.count;
            flagged.failed = true;
            flagged.error = e.what();
            out.per_scale.push_back(std::move(flagged));
        }
    }
    return out;
}

std::vector<double> weighted_multiscale_h(const EigenEstimates& est, int j_min, int j_max) {
    std::vector<double> acc(est.n, 0.0);
    double total = 0.0;
    for (const auto& se : est.per_scale) {
        if (se.failed) continue;
        const int oct = static_cast<int>(std::lround(std::log2(se.scale)));
        if (oct < j_min || oct > j_max) continue;
        const double w = static_cast<double>(se.count);
        for (int p = 0; p < est.n; ++p) acc[p] += w * se.h_hat[p];
        total += w;
    }
    if (total == 0.0) throw InsufficientData("no usable octaves in the requested range", j_min);
    for (double& v : acc) v /= total;
    return acc;
}

double estimate_theta(const WaveletVariance& wv, const ScalePlan& plan) {
    if (wv.n != 2) throw ShapeError("estimate_theta requires a bivariate analysis");
    const auto& ov = octave_for_plan(wv, plan);
    const double b = ov.w(0, 1);
    if (b == 0.0)
        throw DegenerateOffDiagonal("off-diagonal of W is zero; theta estimator undefined");
    const auto e = sym_eig2(ov.w);
    if (!(e.lambda1 > 0.0))
        throw NonPositiveEigenvalue("sample wavelet variance not positive definite", plan.scale());
    return (e.lambda1 - ov.w(0, 0)) / b;
}

Mat estimate_P_orthogonal(const WaveletVariance& wv, const ScalePlan& plan) {
    if (wv.n != 2) throw ShapeError("estimate_P_orthogonal requires a bivariate analysis");
    const auto est = estimate_at(wv, plan);
    return est.eigenvectors;
}

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = static_cast<double>(n) * sxx - sx * sx;
    return (static_cast<double>(n) * sxy - sx * sy) / denom;
}

Mat entrywise_log_slopes(const WaveletVariance& wv, int j_min, int j_max) {
    const int n = wv.n;
    Mat slopes(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            std::vector<double> xs, ys;
            for (const auto& ov : wv.octaves) {
                if (ov.octave < j_min || ov.octave > j_max) continue;
                const double w = std::fabs(ov.w(i, j));
                if (w == 0.0) continue;
                xs.push_back(ov.octave);
                ys.push_back(std::log2(w));
            }
            if (xs.size() < 2)
                throw InsufficientData("not enough octaves for entrywise regression", j_min);
            slopes(i, j) = regression_slope(xs, ys);
            slopes(j, i) = slopes(i, j);
        }
    return slopes;
}

} // namespace ofbm
