#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ofbm/model.hpp"
#include "support/test_util.hpp"

using namespace ofbm;

namespace {

OfbmParams scalar_params(double h, double sigma2 = 1.0) {
    auto hs = HurstSpec::make(Mat::identity(1), {h});
    return OfbmParams::make(hs, Mat(1, 1, {sigma2}));
}

HurstSpec paper_hurst() {
    Mat p(2, 2, {0.98, 0.57, 0.20, 0.82});
    return HurstSpec::make(p, {0.25, 0.85});
}

OfbmParams paper_params(double amp_corr = 0.5) {
    auto hs = paper_hurst();
    Mat amp(2, 2, {1.0, amp_corr, amp_corr, 1.0});
    return OfbmParams::make(hs, sigma_for_amplitude(hs, amp));
}

const PsiTable& psi_table() {
    static PsiTable t = cascade_psi(daubechies_filters(2, FilterVariant::least_asymmetric), 10);
    return t;
}

} // namespace

TEST_CASE("HurstSpec validates and normalizes") {
    auto hs = paper_hurst();
    for (int j = 0; j < 2; ++j) {
        double norm = 0.0;
        for (int i = 0; i < 2; ++i) norm += hs.p(i, j) * hs.p(i, j);
        CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    }
    // Column normalization leaves H itself unchanged.
    Mat p(2, 2, {1.96, 0.57, 0.40, 0.82}); // first column doubled
    auto hs2 = HurstSpec::make(p, {0.25, 0.85});
    CHECK(max_abs(hs.matrix() - hs2.matrix()) < 1e-12);

    CHECK_THROWS_AS(HurstSpec::make(Mat::identity(2), {0.5, 0.5}), UnsupportedSpectrum);
    CHECK_THROWS_AS(HurstSpec::make(Mat::identity(2), {0.9, 0.2}), UnsupportedSpectrum);
    CHECK_THROWS_AS(HurstSpec::make(Mat::identity(2), {0.2, 1.2}), UnsupportedSpectrum);
    CHECK_THROWS_AS(HurstSpec::make(Mat(2, 2, {1, 1, 1, 1}), {0.2, 0.8}), UnsupportedSpectrum);
}

TEST_CASE("OfbmParams rejects non-SPD Sigma") {
    auto hs = paper_hurst();
    CHECK_THROWS_AS(OfbmParams::make(hs, Mat(2, 2, {1.0, 2.0, 2.0, 1.0})), UnsupportedSpectrum);
    CHECK_THROWS_AS(OfbmParams::make(hs, Mat(2, 2, {1.0, 0.3, 0.1, 1.0})), ShapeError);
}

TEST_CASE("sigma_for_amplitude scalar reduction") {
    // n = 1: Sigma = 2 pi / (Gamma(1+2h) sin(pi h)) * amplitude.
    const double h = 0.7;
    auto hs = HurstSpec::make(Mat::identity(1), {h});
    const Mat sigma = sigma_for_amplitude(hs, Mat(1, 1, {2.0}));
    const double kappa = 2.0 * 3.141592653589793 / (std::tgamma(1.0 + 2 * h) *
                                                    std::sin(3.141592653589793 * h));
    CHECK(sigma(0, 0) == doctest::Approx(2.0 * kappa).epsilon(1e-12));
}

TEST_CASE("cov at s = t = 1 returns Sigma exactly") {
    auto params = paper_params();
    CHECK(max_abs(ofbm_cov(params, 1.0, 1.0) - params.sigma) < 1e-12 * max_abs(params.sigma));
}

TEST_CASE("cov reduces to Brownian motion at h = 1/2") {
    auto params = scalar_params(0.5);
    for (auto [s, t] : {std::pair{0.5, 2.0}, {1.0, 1.0}, {3.0, 0.25}}) {
        CHECK(ofbm_cov(params, s, t)(0, 0) == doctest::Approx(std::min(s, t)).epsilon(1e-12));
    }
}

TEST_CASE("scalar FBM covariance value") {
    auto params = scalar_params(0.7);
    const double expect = 0.5 * std::pow(2.0, 1.4); // (1 + 2^1.4 - 1)/2
    CHECK(ofbm_cov(params, 1.0, 2.0)(0, 0) == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("increment covariance basics") {
    auto params = paper_params();
    CHECK(max_abs(increment_cov(params, 0) - params.sigma) < 1e-12 * max_abs(params.sigma));

    auto bm = scalar_params(0.5);
    for (std::int64_t k : {1, 2, 5, -3}) CHECK(std::fabs(increment_cov(bm, k)(0, 0)) < 1e-12);

    auto fbm = scalar_params(0.7);
    CHECK(increment_cov(fbm, 1)(0, 0) ==
          doctest::Approx(0.5 * (std::pow(2.0, 1.4) - 2.0)).epsilon(1e-13));
}

TEST_CASE("increment covariance norm is nonincreasing for scalar h < 3/4") {
    for (double h : {0.3, 0.55, 0.7}) {
        auto params = scalar_params(h);
        double prev = std::fabs(increment_cov(params, 2)(0, 0));
        for (std::int64_t k = 3; k <= 1024; ++k) {
            const double cur = std::fabs(increment_cov(params, k)(0, 0));
            CHECK(cur <= prev * (1.0 + 1e-12));
            prev = cur;
        }
    }
}

TEST_CASE("cov symmetry and operator self-similarity") {
    auto params = paper_params();
    testutil::SplitMix rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const double s = rng.uniform(0.1, 8.0), t = rng.uniform(0.1, 8.0);
        const Mat a = ofbm_cov(params, s, t);
        const Mat b = ofbm_cov(params, t, s);
        CHECK(max_abs(a - b.transpose()) <= 1e-12 * std::max(1.0, max_abs(a)));

        const double c = rng.uniform(0.2, 5.0);
        const Mat lhs = ofbm_cov(params, c * s, c * t);
        const Mat ch = params.hurst.power(c);
        const Mat rhs = ch * a * ch.transpose();
        CHECK(max_abs(lhs - rhs) <= 1e-10 * std::max(1.0, max_abs(lhs)));
    }
}

TEST_CASE("covariance kernel is positive semidefinite on time grids") {
    auto params = paper_params();
    const int m = 16, n = 2;
    std::vector<double> ts;
    for (int i = 0; i < m; ++i) ts.push_back(0.25 + 0.6 * i + 0.01 * i * i);
    Mat gram(m * n, m * n);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            const Mat c = ofbm_cov(params, ts[i], ts[j]);
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) gram(i * n + a, j * n + b) = c(a, b);
        }
    for (int i = 0; i < m * n; ++i)
        for (int j = i + 1; j < m * n; ++j) {
            const double v = 0.5 * (gram(i, j) + gram(j, i));
            gram(i, j) = v;
            gram(j, i) = v;
        }
    const auto eig = sym_eig_n(gram);
    double trace = 0.0;
    for (int i = 0; i < m * n; ++i) trace += gram(i, i);
    CHECK(eig.values.front() >= -1e-8 * trace);
}

TEST_CASE("wavelet spectrum obeys exact operator scaling (P5)") {
    auto params = paper_params();
    SpectrumTable table(params, psi_table());
    const Mat two_h = params.hurst.power(2.0);
    for (int j = 0; j < 6; ++j) {
        const Mat lhs = table.at_octave(j + 1);
        const Mat rhs = two_h * table.at_octave(j) * two_h.transpose();
        CHECK(frob_norm(lhs - rhs) <= 1e-10 * frob_norm(lhs));
    }
}

TEST_CASE("scalar spectrum ratio is a pure power law") {
    auto params = scalar_params(0.7);
    SpectrumTable table(params, psi_table());
    const double base = table.at_octave(0)(0, 0);
    for (int j = 1; j <= 8; ++j)
        CHECK(table.at_octave(j)(0, 0) / base ==
              doctest::Approx(std::pow(2.0, 2 * 0.7 * j)).epsilon(1e-12));
}

TEST_CASE("spectrum quadrature is refinement-stable at the default tolerance") {
    auto params = scalar_params(0.7);
    CHECK_NOTHROW(SpectrumTable(params, psi_table(), 1e-6));
    // An absurd tolerance must trip the gate.
    CHECK_THROWS_AS(SpectrumTable(params, psi_table(), 1e-14), QuadratureError);
}

TEST_CASE("wavelet spectrum is SPD (P7)") {
    auto params = paper_params();
    SpectrumTable table(params, psi_table());
    for (int j : {0, 2, 5, 9}) {
        const auto e = sym_eig2(table.at_octave(j));
        CHECK(e.lambda1 > 0.0);
    }
}

TEST_CASE("b_matrix identities") {
    auto params = paper_params();
    SpectrumTable table(params, psi_table());
    const Mat ew4 = table.at_octave(4);
    const Mat b4 = b_matrix_from(params, ew4);

    // reconstruction P B P^T = EW
    const Mat rec = params.hurst.p * b4 * params.hurst.p.transpose();
    CHECK(frob_norm(rec - ew4) <= 1e-12 * frob_norm(ew4));
    CHECK(b4(1, 1) > 0.0);
    CHECK(std::fabs(b4(0, 1) - b4(1, 0)) <= 1e-12 * frob_norm(b4));

    // P = I: B = EW
    auto hs = HurstSpec::make(Mat::identity(2), {0.25, 0.85});
    auto diag_params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat::identity(2)));
    SpectrumTable dt(diag_params, psi_table());
    const Mat ew = dt.at_octave(3);
    CHECK(max_abs(b_matrix_from(diag_params, ew) - ew) < 1e-12 * max_abs(ew));
}

TEST_CASE("theoretical eigen estimates: decoupled case") {
    // P = I and diagonal Sigma: lambda_1^E(s) = s^{2 h1} EW(1)_11.
    auto hs = HurstSpec::make(Mat::identity(2), {0.25, 0.85});
    auto params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat(2, 2, {1.0, 0.0, 0.0, 0.5})));
    SpectrumTable table(params, psi_table());
    const Mat ew1 = table.base();
    const auto te = theoretical_eigen_h(table, 3, 16); // scale 2^7
    const double s = 128.0;
    CHECK(te.lambda[0] == doctest::Approx(std::pow(s, 0.5) * ew1(0, 0)).epsilon(1e-10));
    CHECK(te.h[0] ==
          doctest::Approx(0.25 + std::log(ew1(0, 0)) / (2 * std::log(s))).epsilon(1e-10));
}

TEST_CASE("theoretical eigen estimates converge monotonically at coarse scales") {
    auto params = paper_params();
    SpectrumTable table(params, psi_table());
    double prev1 = 1e300, prev2 = 1e300;
    for (int la = 4; la <= 20; la += 2) {
        const auto te = theoretical_eigen_h(table, 0, std::int64_t{1} << la);
        const double err1 = std::fabs(te.h[0] - 0.25);
        const double err2 = std::fabs(te.h[1] - 0.85);
        CHECK(err1 < prev1);
        CHECK(err2 < prev2);
        prev1 = err1;
        prev2 = err2;
    }
    const auto far = theoretical_eigen_h(table, 0, std::int64_t{1} << 40);
    CHECK(std::fabs(far.h[0] - 0.25) < prev1);
    CHECK(std::fabs(far.h[1] - 0.85) < prev2);
    CHECK(std::fabs(far.h[0] - 0.25) < 0.05);
    CHECK(std::fabs(far.h[1] - 0.85) < 0.05);
}

TEST_CASE("lambda1 second-order expansion in the uncoupled-amplitude instance") {
    // amplitude = I gives EW(a 2^j) = P diag(w1 a^{2h1}, w2 a^{2h2}) P^T.
    auto hs = paper_hurst();
    auto params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat::identity(2)));
    SpectrumTable table(params, psi_table());
    const int j = 2;
    const Mat bj = b_matrix_from(params, table.at_octave(j));
    const double w1 = bj(0, 0), w2 = bj(1, 1);
    CHECK(std::fabs(bj(0, 1)) < 1e-10 * frob_norm(bj));
    const double det_ew = determinant(table.at_octave(j));
    const double h1 = 0.25, h2 = 0.85;

    double prev_ratio = 1e300;
    for (int la = 3; la <= 9; ++la) {
        const double a = std::ldexp(1.0, la);
        const auto te = theoretical_eigen_h(table, j, std::int64_t{1} << la);
        const double denom = w1 * std::pow(a, 2 * (h1 - h2)) + w2;
        const double expansion =
            (2.0 * det_ew / denom) * std::pow(a, 2 * h1) *
            (0.5 + 0.5 * det_ew / (denom * denom) * std::pow(a, -2 * (h2 - h1)));
        const double rel_err = std::fabs(te.lambda[0] - expansion) / te.lambda[0];
        // o(a^{-2(h2-h1)}): the normalized error must vanish as a grows.
        const double ratio = rel_err * std::pow(a, 2 * (h2 - h1));
        CHECK(ratio < prev_ratio * (1.0 + 1e-9));
        prev_ratio = ratio;
    }
    CHECK(prev_ratio < 0.05);
}

TEST_CASE("theta center requires a nonzero off-diagonal") {
    auto hs = HurstSpec::make(Mat::identity(2), {0.3, 0.7});
    auto params = OfbmParams::make(hs, sigma_for_amplitude(hs, Mat::identity(2)));
    SpectrumTable table(params, psi_table());
    CHECK_FALSE(theoretical_eigen_h(table, 3, 4).theta_valid);
    CHECK_THROWS_AS(theoretical_theta(table, 3, 4), DegenerateOffDiagonal);
}

TEST_CASE("theta center approaches -p12/p22") {
    auto params = paper_params();
    SpectrumTable table(params, psi_table());
    const double target = -params.hurst.p(0, 1) / params.hurst.p(1, 1);
    const auto near = theoretical_eigen_h(table, 3, 1 << 6);
    const auto far = theoretical_eigen_h(table, 3, std::int64_t{1} << 24);
    CHECK(std::fabs(far.theta - target) < std::fabs(near.theta - target));
    CHECK(far.theta == doctest::Approx(target).epsilon(5e-3));
}
