#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ofbm/synth.hpp"
#include "ofbm/wavelet.hpp"
#include "support/test_util.hpp"

using namespace ofbm;

namespace {

SamplePath make_levels(int n, std::int64_t len) {
    SamplePath p;
    p.n = n;
    p.len = len;
    p.kind = SamplePath::Kind::levels;
    p.values.assign(static_cast<size_t>(len) * n, 0.0);
    return p;
}

double filter_moment(const std::vector<double>& g, int q) {
    double acc = 0.0;
    for (size_t k = 0; k < g.size(); ++k) acc += std::pow(static_cast<double>(k), q) * g[k];
    return acc;
}

} // namespace

TEST_CASE("daubechies_filters satisfies the defining equations") {
    const double sqrt2 = std::sqrt(2.0);
    for (int n_psi = 2; n_psi <= 10; ++n_psi) {
        for (auto variant : {FilterVariant::extremal_phase, FilterVariant::least_asymmetric}) {
            const auto f = daubechies_filters(n_psi, variant);
            REQUIRE(static_cast<int>(f.h.size()) == 2 * n_psi);

            double sum_h = 0.0, sum_g = 0.0;
            for (double v : f.h) sum_h += v;
            for (double v : f.g) sum_g += v;
            CHECK(std::fabs(sum_h - sqrt2) < 1e-12);
            CHECK(std::fabs(sum_g) < 1e-12);

            for (int m = 0; m < n_psi; ++m) {
                double acc = 0.0;
                for (size_t k = 0; k + 2 * m < f.h.size(); ++k) acc += f.h[k] * f.h[k + 2 * m];
                CHECK(std::fabs(acc - (m == 0 ? 1.0 : 0.0)) < 1e-12);
            }

            // Discrete vanishing moments; scaled by the intrinsic magnitude
            // (2N-1)^q, since the raw q = 9 moment multiplies coefficient
            // rounding by ~3e11.
            for (int q = 0; q < n_psi; ++q) {
                const double scale = std::pow(static_cast<double>(2 * n_psi - 1), q);
                CHECK(std::fabs(filter_moment(f.g, q)) / scale < 1e-12);
                if (n_psi <= 7) CHECK(std::fabs(filter_moment(f.g, q)) < 1e-10);
            }

            // g_k = (-1)^k h_{2N-1-k}
            for (size_t k = 0; k < f.g.size(); ++k) {
                const double expect =
                    ((k % 2 == 0) ? 1.0 : -1.0) * f.h[f.h.size() - 1 - k];
                CHECK(f.g[k] == doctest::Approx(expect));
            }
        }
    }
}

TEST_CASE("db2 matches the closed-form coefficients") {
    const auto f = daubechies_filters(2, FilterVariant::extremal_phase);
    const double s3 = std::sqrt(3.0), s2 = std::sqrt(2.0);
    // One of the two valid orientations of the classic quadruple.
    const std::vector<double> ref = {(1 - s3) / (4 * s2), (3 - s3) / (4 * s2),
                                     (3 + s3) / (4 * s2), (1 + s3) / (4 * s2)};
    for (int k = 0; k < 4; ++k) CHECK(f.h[k] == doctest::Approx(ref[k]).epsilon(1e-13));
}

TEST_CASE("least-asymmetric variant differs from extremal phase for n_psi >= 4") {
    const auto ep = daubechies_filters(4, FilterVariant::extremal_phase);
    const auto la = daubechies_filters(4, FilterVariant::least_asymmetric);
    double diff = 0.0;
    for (size_t k = 0; k < ep.h.size(); ++k) diff = std::max(diff, std::fabs(ep.h[k] - la.h[k]));
    CHECK(diff > 1e-3);
}

TEST_CASE("unsupported filter order is rejected") {
    CHECK_THROWS_AS(daubechies_filters(1, FilterVariant::extremal_phase), UnsupportedFilter);
    CHECK_THROWS_AS(daubechies_filters(11, FilterVariant::extremal_phase), UnsupportedFilter);
}

TEST_CASE("cascade_psi invariants") {
    const auto f = daubechies_filters(2, FilterVariant::least_asymmetric);
    const auto psi = cascade_psi(f, 10);

    CHECK(std::fabs(psi.a_phi - 1.0) < 1e-6);

    double int_psi = 0.0, int_psi2 = 0.0;
    for (double v : psi.psi) {
        int_psi += v * psi.psi_step;
        int_psi2 += v * v * psi.psi_step;
    }
    CHECK(std::fabs(int_psi) < 1e-6);
    CHECK(std::fabs(int_psi2 - 1.0) < 1e-4);

    // Vanishing moments of the sampled psi (exact cell moments).
    for (int q = 0; q < f.n_psi; ++q) {
        double acc = 0.0;
        for (size_t i = 0; i < psi.psi.size(); ++i) {
            const double t0 = i * psi.psi_step, t1 = t0 + psi.psi_step;
            acc += psi.psi[i] * (std::pow(t1, q + 1) - std::pow(t0, q + 1)) / (q + 1);
        }
        CHECK(std::fabs(acc) < 1e-4);
    }
}

TEST_CASE("cascade refinement is stable") {
    const auto f = daubechies_filters(2, FilterVariant::least_asymmetric);
    const auto coarse = cascade_psi(f, 10);
    const auto fine = cascade_psi(f, 11);
    auto energy = [](const PsiTable& t) {
        double acc = 0.0;
        for (double v : t.psi) acc += v * v * t.psi_step;
        return acc;
    };
    CHECK(std::fabs(energy(coarse) - energy(fine)) < 1e-5);
}

TEST_CASE("pyramid annihilates constants exactly") {
    const auto f = daubechies_filters(2, FilterVariant::least_asymmetric);
    auto path = make_levels(1, 1024);
    for (std::int64_t t = 0; t < path.len; ++t) path.at(t, 0) = 7.25;
    auto coeffs = pyramid(path, f, 5);
    for (const auto& oc : coeffs.octaves)
        for (double v : oc.detail) CHECK(std::fabs(v) < 1e-12);
}

TEST_CASE("high-pass filter annihilates k^2 for n_psi = 3") {
    const auto f = daubechies_filters(3, FilterVariant::extremal_phase);
    for (int k0 : {0, 11, 257}) {
        double acc = 0.0;
        for (int k = 0; k < f.taps(); ++k) {
            const double t = static_cast<double>(k0 + k);
            acc += f.g[k] * t * t;
        }
        CHECK(std::fabs(acc) < 1e-10 * (k0 + 1) * (k0 + 1));
    }
}

TEST_CASE("scalar wavelet variance slope recovers 2h") {
    auto hs = HurstSpec::make(Mat::identity(1), {0.7});
    auto params = OfbmParams::make(hs, Mat(1, 1, {1.0}));
    const auto filters = daubechies_filters(2, FilterVariant::least_asymmetric);
    const std::int64_t len = std::int64_t{1} << 16;
    const OfgnSynthesizer synth(params, len);

    // Average log2 W(2^j) over a few seeds, regress over j in [4, 10].
    const int seeds = 5;
    std::vector<double> mean_log(7, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < seeds; ++r) {
        auto coeffs = pyramid(ofgn_to_ofbm(synth.draw(31 + r)), filters, 10);
        normalize_coeffs(coeffs);
        const auto wv = wavelet_variance(coeffs);
        for (const auto& ov : wv.octaves) {
            if (ov.octave < 4) continue;
#pragma omp critical
            mean_log[ov.octave - 4] += std::log2(ov.w(0, 0)) / seeds;
        }
    }
    std::vector<double> js;
    for (int j = 4; j <= 10; ++j) js.push_back(j);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < js.size(); ++i) {
        sx += js[i];
        sy += mean_log[i];
        sxx += js[i] * js[i];
        sxy += js[i] * mean_log[i];
    }
    const double n = static_cast<double>(js.size());
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(2 * 0.7).epsilon(0.1 / 1.4));
}

TEST_CASE("pyramid annihilates linear sequences for n_psi = 2") {
    const auto f = daubechies_filters(2, FilterVariant::least_asymmetric);
    auto path = make_levels(1, 1024);
    for (std::int64_t t = 0; t < path.len; ++t) path.at(t, 0) = 0.5 * static_cast<double>(t) - 3.0;
    auto coeffs = pyramid(path, f, 5);
    for (const auto& oc : coeffs.octaves)
        for (double v : oc.detail) CHECK(std::fabs(v) < 1e-10 * path.len);
}

TEST_CASE("pyramid coefficient counts decimate with boundary losses") {
    const auto f = daubechies_filters(3, FilterVariant::extremal_phase);
    auto path = make_levels(1, 4096);
    auto coeffs = pyramid(path, f, 6);
    std::int64_t expect_avail = 4096;
    for (const auto& oc : coeffs.octaves) {
        const std::int64_t count = (expect_avail - f.taps()) / 2 + 1;
        CHECK(oc.count == count);
        // within O(taps) of the ideal dyadic count
        CHECK(std::llabs(oc.count - (4096 >> oc.octave)) <= 2 * f.taps());
        expect_avail = count;
    }
}

TEST_CASE("pyramid rejects short series with the achievable octave") {
    const auto f = daubechies_filters(2, FilterVariant::extremal_phase);
    auto path = make_levels(1, 32);
    try {
        pyramid(path, f, 8);
        FAIL("expected InsufficientData");
    } catch (const InsufficientData& e) {
        CHECK(e.achievable_octave >= 2);
        CHECK(e.achievable_octave < 8);
    }
}

TEST_CASE("pyramid requires a levels path") {
    const auto f = daubechies_filters(2, FilterVariant::extremal_phase);
    auto path = make_levels(1, 64);
    path.kind = SamplePath::Kind::increments;
    CHECK_THROWS_AS(pyramid(path, f, 2), KindError);
}

TEST_CASE("normalize_coeffs applies the per-octave scale once") {
    const auto f = daubechies_filters(2, FilterVariant::extremal_phase);
    auto path = make_levels(1, 512);
    testutil::SplitMix rng(5);
    for (std::int64_t t = 0; t < path.len; ++t) path.at(t, 0) = rng.gaussian();
    auto raw = pyramid(path, f, 3);
    auto scaled = raw;
    normalize_coeffs(scaled);
    normalize_coeffs(scaled); // idempotent
    for (size_t o = 0; o < raw.octaves.size(); ++o) {
        const double factor = std::pow(2.0, -0.5 * raw.octaves[o].octave);
        for (size_t i = 0; i < raw.octaves[o].detail.size(); ++i)
            CHECK(scaled.octaves[o].detail[i] ==
                  doctest::Approx(raw.octaves[o].detail[i] * factor));
    }
}

TEST_CASE("filter bank conserves energy on zero-padded input") {
    // With 2N-1 zeros of padding on each side every nonzero output position
    // is interior, so the orthonormal split is exact.
    const auto f = daubechies_filters(3, FilterVariant::extremal_phase);
    testutil::SplitMix rng(17);
    const int taps = f.taps();
    const std::int64_t core_len = 257;
    auto path = make_levels(1, core_len + 4 * taps);
    for (std::int64_t t = 2 * taps; t < 2 * taps + core_len; ++t) path.at(t, 0) = rng.gaussian();

    // One level by hand over the full (padded) index range.
    double in_energy = 0.0;
    for (std::int64_t t = 0; t < path.len; ++t) in_energy += path.at(t, 0) * path.at(t, 0);
    double out_energy = 0.0;
    const std::int64_t out_count = (path.len - taps) / 2 + 1;
    for (std::int64_t k = 0; k < out_count; ++k) {
        double lo = 0.0, hi = 0.0;
        for (int t = 0; t < taps; ++t) {
            lo += f.h[t] * path.at(2 * k + t, 0);
            hi += f.g[t] * path.at(2 * k + t, 0);
        }
        out_energy += lo * lo + hi * hi;
    }
    CHECK(out_energy == doctest::Approx(in_energy).epsilon(1e-10));
}

TEST_CASE("wavelet_variance of canonical coefficient sets") {
    WaveletCoeffs coeffs;
    coeffs.n = 2;
    OctaveCoeffs oc;
    oc.octave = 1;
    oc.normalized = true;

    // single vector v -> v v^T (count requirement relaxed via min_count = 1)
    oc.count = 1;
    oc.detail = {3.0, -1.0};
    coeffs.octaves = {oc};
    auto wv = wavelet_variance(coeffs, 1);
    CHECK(wv.octaves[0].w(0, 0) == doctest::Approx(9.0));
    CHECK(wv.octaves[0].w(0, 1) == doctest::Approx(-3.0));
    CHECK(wv.octaves[0].w(1, 1) == doctest::Approx(1.0));

    // canonical basis vectors e1, e2 -> I/2
    oc.count = 2;
    oc.detail = {1.0, 0.0, 0.0, 1.0};
    coeffs.octaves = {oc};
    wv = wavelet_variance(coeffs);
    CHECK(max_abs(wv.octaves[0].w - Mat::identity(2) * 0.5) < 1e-15);
}

TEST_CASE("coefficient sequence is stationary in k (half-split W estimates)") {
    Mat p(2, 2, {0.98, 0.57, 0.20, 0.82});
    auto hs = HurstSpec::make(p, {0.25, 0.85});
    auto params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat(2, 2, {1.0, 0.5, 0.5, 1.0})));
    const auto filters = daubechies_filters(2, FilterVariant::least_asymmetric);
    const OfgnSynthesizer synth(params, 1 << 12);
    const int seeds = 40, j = 4;

    int ok = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : ok)
    for (int r = 0; r < seeds; ++r) {
        auto coeffs = pyramid(ofgn_to_ofbm(synth.draw(5000 + r)), filters, j);
        normalize_coeffs(coeffs);
        const auto& oc = coeffs.octaves.back();
        const std::int64_t half = oc.count / 2;
        Mat wa(2, 2), wb(2, 2);
        for (std::int64_t k = 0; k < oc.count; ++k) {
            const double* row = &oc.detail[static_cast<size_t>(k) * 2];
            Mat& tgt = (k < half) ? wa : wb;
            for (int i = 0; i < 2; ++i)
                for (int jj = 0; jj < 2; ++jj) tgt(i, jj) += row[i] * row[jj];
        }
        wa = wa * (1.0 / static_cast<double>(half));
        wb = wb * (1.0 / static_cast<double>(oc.count - half));
        const Mat w = (wa + wb) * 0.5;
        // band 6 ||W|| / sqrt(K) with K the size of each half
        if (max_abs(wa - wb) < 6.0 * max_abs(w) / std::sqrt(static_cast<double>(half))) ++ok;
    }
    CHECK(ok >= static_cast<int>(0.95 * seeds));
}

TEST_CASE("operator scaling in law: mean W(2^j) matches 2^H W(2^{j-1}) 2^{H^T}") {
    Mat p(2, 2, {0.98, 0.57, 0.20, 0.82});
    auto hs = HurstSpec::make(p, {0.25, 0.85});
    auto params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat(2, 2, {1.0, 0.5, 0.5, 1.0})));
    const auto filters = daubechies_filters(2, FilterVariant::least_asymmetric);
    const Mat two_h = hs.power(2.0);
    const int replicates = 500;
    const OfgnSynthesizer synth(params, 1 << 13);

    for (int j : {5, 6, 7, 8}) {
        Mat sum(2, 2), sumsq(2, 2);
#pragma omp parallel for schedule(dynamic)
        for (int r = 0; r < replicates; ++r) {
            auto coeffs = pyramid(ofgn_to_ofbm(synth.draw(7777 + r)), filters, j);
            normalize_coeffs(coeffs);
            const auto wv = wavelet_variance(coeffs);
            const Mat d = wv.find(j)->w - two_h * wv.find(j - 1)->w * two_h.transpose();
#pragma omp critical
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    sum(a, b) += d(a, b);
                    sumsq(a, b) += d(a, b) * d(a, b);
                }
        }
        // E[d] = 0 exactly by P5/P6; family-wise 4-sigma MC band over the
        // 16 (octave, entry) checks.
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const double m = sum(a, b) / replicates;
                const double sd =
                    std::sqrt((sumsq(a, b) / replicates - m * m) / (replicates - 1.0));
                CHECK(std::fabs(m) <= 4.0 * sd);
            }
    }
}

TEST_CASE("wavelet_variance requires enough coefficients") {
    WaveletCoeffs coeffs;
    coeffs.n = 1;
    OctaveCoeffs oc;
    oc.octave = 1;
    oc.count = 1;
    oc.detail = {1.0};
    oc.normalized = true;
    coeffs.octaves = {oc};
    CHECK_THROWS_AS(wavelet_variance(coeffs), InsufficientData);
}
