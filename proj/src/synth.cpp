#include "ofbm/synth.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "ofbm/fft.hpp"
#include "ofbm/matfun.hpp"
#include "ofbm/rng.hpp"

namespace ofbm {

namespace {

// 2n independent standard normals for frequency f, as the complex vector
// eps + i*eta.  Pure function of (key, f), so any parallel schedule over
// frequencies reproduces the same stream.
void frequency_noise(std::uint64_t key, std::uint64_t f, int n, std::complex<double>* out) {
    constexpr double two_pi = 6.283185307179586476925287;
    for (int c = 0; c < n; ++c) {
        const auto [a, b] = CounterRng::block(key, f, static_cast<std::uint64_t>(c));
        const double u1 = static_cast<double>((a >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[c] = std::complex<double>(r * std::cos(two_pi * u2), r * std::sin(two_pi * u2));
    }
}

struct Embedding {
    std::int64_t period = 0;
    // Symmetric factor U_f of each spectral block, f = 0 .. period/2,
    // flattened row-major n x n per frequency.
    std::vector<double> factors;
};

// Assemble spectral blocks for half-length m; returns false (and the most
// negative eigenvalue seen) if a block fails the PSD tolerance.
bool try_embedding(const OfbmParams& params, std::int64_t m, Embedding& out, double& worst) {
    const int n = params.dim();
    const std::int64_t period = 2 * m;

    // F(k) = |k|^H Sigma |k|^{H^T} for k = 0..m, then C(k) by second difference.
    std::vector<Mat> f(m + 2);
    for (std::int64_t k = 0; k <= m + 1; ++k) f[k] = scaled_sigma(params, static_cast<double>(k));
    auto cov = [&](std::int64_t k) {
        Mat c = f[k + 1];
        c += (k >= 1) ? f[k - 1] : f[1 - k];
        c += f[k] * (-2.0);
        return c * 0.5;
    };

    // Spectral blocks via one FFT per upper-triangle entry.
    std::vector<std::vector<std::complex<double>>> spectra(static_cast<size_t>(n) * (n + 1) / 2);
    {
        std::vector<Mat> c(m + 1);
        for (std::int64_t k = 0; k <= m; ++k) c[k] = cov(k);
        size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++idx) {
                auto& seq = spectra[idx];
                seq.assign(period, 0.0);
                for (std::int64_t l = 0; l <= m; ++l) seq[l] = c[l](i, j);
                for (std::int64_t l = m + 1; l < period; ++l) seq[l] = c[period - l](i, j);
                fft(seq, false);
            }
    }

    out.period = period;
    out.factors.assign(static_cast<size_t>(period / 2 + 1) * n * n, 0.0);
    worst = 0.0;

    double max_eig = 0.0;
    std::vector<double> min_per_f(period / 2 + 1), max_per_f(period / 2 + 1);
    std::vector<SymEigen> eigs(period / 2 + 1);
#pragma omp parallel for schedule(static)
    for (std::int64_t q = 0; q <= period / 2; ++q) {
        Mat lam(n, n);
        size_t idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j, ++idx) {
                const double v = spectra[idx][q].real();
                lam(i, j) = v;
                lam(j, i) = v;
            }
        if (n == 2) {
            const auto e2 = sym_eig2(lam);
            eigs[q].values = {e2.lambda1, e2.lambda2};
            eigs[q].vectors = Mat(2, 2, {e2.v1[0], e2.v2[0], e2.v1[1], e2.v2[1]});
        } else {
            eigs[q] = sym_eig_n(lam);
        }
        min_per_f[q] = eigs[q].values.front();
        max_per_f[q] = eigs[q].values.back();
    }
    for (std::int64_t q = 0; q <= period / 2; ++q) {
        worst = std::min(worst, min_per_f[q]);
        max_eig = std::max(max_eig, max_per_f[q]);
    }
    if (worst < -1e-9 * max_eig) return false;

    for (std::int64_t q = 0; q <= period / 2; ++q) {
        const auto& e = eigs[q];
        double* u = out.factors.data() + static_cast<size_t>(q) * n * n;
        // U = V diag(sqrt(max(lambda,0))) V^T
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k)
                    acc += e.vectors(i, k) * std::sqrt(std::max(e.values[k], 0.0)) *
                           e.vectors(j, k);
                u[i * n + j] = acc;
            }
    }
    return true;
}

} // namespace

OfgnSynthesizer::OfgnSynthesizer(const OfbmParams& params, std::int64_t len)
    : n_(params.dim()), len_(len) {
    if (len < 2) throw ShapeError("synth_ofgn requires at least two samples");

    Embedding emb;
    double worst = 0.0;
    bool ok = false;
    const std::int64_t m0 =
        static_cast<std::int64_t>(std::bit_ceil(static_cast<std::uint64_t>(2 * len)));
    for (std::int64_t m = m0; m <= 8 * m0; m *= 2) {
        if (try_embedding(params, m, emb, worst)) {
            ok = true;
            break;
        }
    }
    if (!ok)
        throw EmbeddingError("circulant embedding not nonnegative definite after padding to 16N "
                             "(most negative spectral eigenvalue " +
                                 std::to_string(worst) + ")",
                             worst);
    period_ = emb.period;
    factors_ = std::move(emb.factors);
}

SamplePath OfgnSynthesizer::draw(std::uint64_t seed) const {
    const int n = n_;
    const std::int64_t period = period_;
    std::vector<std::vector<std::complex<double>>> comp(
        n, std::vector<std::complex<double>>(period));

#pragma omp parallel for schedule(static)
    for (std::int64_t f = 0; f < period; ++f) {
        std::complex<double> xi[8];
        frequency_noise(seed, static_cast<std::uint64_t>(f), n, xi);
        const std::int64_t q = (f <= period / 2) ? f : period - f;
        const double* u = factors_.data() + static_cast<size_t>(q) * n * n;
        for (int i = 0; i < n; ++i) {
            std::complex<double> acc(0.0, 0.0);
            for (int j = 0; j < n; ++j) acc += u[i * n + j] * xi[j];
            comp[i][f] = acc;
        }
    }

    const double scale = std::sqrt(static_cast<double>(period));
    SamplePath path;
    path.n = n;
    path.len = len_;
    path.seed = seed;
    path.kind = SamplePath::Kind::increments;
    path.values.resize(static_cast<size_t>(len_) * n);
    for (int c = 0; c < n; ++c) {
        fft(comp[c], true);
        for (std::int64_t t = 0; t < len_; ++t) path.at(t, c) = comp[c][t].real() * scale;
    }
    return path;
}

SamplePath synth_ofgn(const OfbmParams& params, std::int64_t len, std::uint64_t seed) {
    return OfgnSynthesizer(params, len).draw(seed);
}

SamplePath ofgn_to_ofbm(const SamplePath& increments) {
    if (increments.kind != SamplePath::Kind::increments)
        throw KindError("ofgn_to_ofbm expects an increments path");
    SamplePath levels = increments;
    levels.kind = SamplePath::Kind::levels;
    for (std::int64_t t = 1; t < levels.len; ++t)
        for (int c = 0; c < levels.n; ++c) levels.at(t, c) += levels.at(t - 1, c);
    return levels;
}

} // namespace ofbm
