#include "ofbm/reference.hpp"

#include <cmath>
#include <vector>

#include "ofbm/rng.hpp"

namespace ofbm::ref {

OctaveCoeffs continuous_coeffs(const SamplePath& levels, const PsiTable& psi, int octave) {
    if (levels.kind != SamplePath::Kind::levels)
        throw KindError("continuous_coeffs expects a levels path");
    const int n = levels.n;
    const std::int64_t len = levels.len;
    const double scale = std::ldexp(1.0, octave);
    const double support = psi.support_length();

    // k range with the full support inside [0, N].
    const std::int64_t k_max =
        static_cast<std::int64_t>(std::floor(static_cast<double>(len) / scale - support));
    if (k_max < 0) throw InsufficientData("path too short for continuous coefficients", 0);

    OctaveCoeffs out;
    out.octave = octave;
    out.count = k_max + 1;
    out.normalized = true;
    out.detail.assign(static_cast<size_t>(out.count) * n, 0.0);

    // B-hat(m) for integer m (B(0) = 0, then the stored samples) and its
    // cumulative trapezoid integral A(m) = int_0^m B-hat.
    std::vector<std::vector<double>> b(n, std::vector<double>(len + 1, 0.0));
    std::vector<std::vector<double>> cum(n, std::vector<double>(len + 2, 0.0));
    for (int c = 0; c < n; ++c) {
        for (std::int64_t m = 1; m <= len; ++m) b[c][m] = levels.at(m - 1, c);
        for (std::int64_t m = 0; m < len; ++m)
            cum[c][m + 1] = cum[c][m] + 0.5 * (b[c][m] + b[c][m + 1]);
        cum[c][len + 1] = cum[c][len]; // guard
    }
    auto integral_to = [&](int c, double x) {
        // int_0^x B-hat for x in [0, len]
        const double fl = std::floor(x);
        std::int64_t m = static_cast<std::int64_t>(fl);
        if (m >= len) return cum[c][len];
        const double f = x - fl;
        return cum[c][m] + f * b[c][m] + 0.5 * f * f * (b[c][m + 1] - b[c][m]);
    };

#pragma omp parallel for schedule(static)
    for (std::int64_t k = 0; k <= k_max; ++k) {
        for (int c = 0; c < n; ++c) {
            double acc = 0.0;
            for (size_t i = 0; i < psi.psi.size(); ++i) {
                if (psi.psi[i] == 0.0) continue;
                const double u0 = scale * (static_cast<double>(i) * psi.psi_step + k);
                const double u1 = u0 + scale * psi.psi_step;
                acc += psi.psi[i] * (integral_to(c, u1) - integral_to(c, u0));
            }
            out.detail[static_cast<size_t>(k) * n + c] = acc / scale;
        }
    }
    return out;
}

Mat midpoint_base_spectrum(const OfbmParams& params, const PsiTable& psi) {
    const int n = params.dim();
    const double step = psi.psi_step;
    Mat acc(n, n);
    for (size_t a = 0; a < psi.psi.size(); ++a) {
        if (psi.psi[a] == 0.0) continue;
        for (size_t b = 0; b < psi.psi.size(); ++b) {
            if (psi.psi[b] == 0.0) continue;
            const double u = (static_cast<double>(a) - static_cast<double>(b)) * step;
            acc += scaled_sigma(params, u) * (psi.psi[a] * psi.psi[b]);
        }
    }
    return acc * (-0.5 * step * step);
}

SamplePath dense_ofgn(const OfbmParams& params, std::int64_t len, std::uint64_t seed) {
    const int n = params.dim();
    const std::int64_t dim = len * n;

    std::vector<Mat> cov(len);
    for (std::int64_t k = 0; k < len; ++k) cov[k] = increment_cov(params, k);

    // Covariance of (W_1,...,W_N) stacked; lower Cholesky in place.
    std::vector<double> l(static_cast<size_t>(dim) * dim, 0.0);
    auto at = [&](std::int64_t i, std::int64_t j) -> double& {
        return l[static_cast<size_t>(i) * dim + j];
    };
    for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j <= i; ++j) {
            const std::int64_t ti = i / n, tj = j / n;
            const int ci = static_cast<int>(i % n), cj = static_cast<int>(j % n);
            const Mat& block = cov[std::llabs(ti - tj)];
            at(i, j) = (ti >= tj) ? block(cj, ci) : block(ci, cj);
        }
    for (std::int64_t j = 0; j < dim; ++j) {
        double d = at(j, j);
        for (std::int64_t k = 0; k < j; ++k) d -= at(j, k) * at(j, k);
        if (d <= 0.0) throw UnsupportedSpectrum("dense covariance is not positive definite");
        at(j, j) = std::sqrt(d);
        for (std::int64_t i = j + 1; i < dim; ++i) {
            double v = at(i, j);
            for (std::int64_t k = 0; k < j; ++k) v -= at(i, k) * at(j, k);
            at(i, j) = v / at(j, j);
        }
    }

    CounterRng rng(seed);
    std::vector<double> xi(dim);
    for (auto& v : xi) v = rng.next_gaussian();

    SamplePath path;
    path.n = n;
    path.len = len;
    path.seed = seed;
    path.kind = SamplePath::Kind::increments;
    path.values.assign(static_cast<size_t>(dim), 0.0);
    for (std::int64_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (std::int64_t k = 0; k <= i; ++k) acc += at(i, k) * xi[k];
        path.values[static_cast<size_t>(i)] = acc;
    }
    return path;
}

} // namespace ofbm::ref
