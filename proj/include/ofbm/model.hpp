#ifndef OFBM_MODEL_HPP
#define OFBM_MODEL_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "ofbm/mat.hpp"
#include "ofbm/matfun.hpp"
#include "ofbm/wavelet.hpp"

namespace ofbm {

// Hurst matrix H = P diag(h) P^{-1} with unit-norm columns of P and
// ascending eigenvalues in (0,1).  Columns are renormalized on construction
// (column scaling does not change H).
struct HurstSpec {
    int n = 0;
    Mat p;
    Mat p_inv;
    std::vector<double> h;

    static HurstSpec make(Mat p, std::vector<double> h);

    Mat matrix() const;
    Mat power(double c) const;           // c^H
    Mat power_transpose(double c) const; // c^{H^T}
    double h_min() const { return h.front(); }
    double h_max() const { return h.back(); }
};

// Process law: (P, h) plus Sigma = E B_H(1) B_H(1)^T, symmetric positive
// definite (properness), with time-reversibility assumed throughout.
struct OfbmParams {
    HurstSpec hurst;
    Mat sigma;

    static OfbmParams make(HurstSpec hurst, Mat sigma);
    int dim() const { return hurst.n; }
};

// Sigma = E B_H(1) B_H(1)^T induced by a real spectral amplitude AA^T =
// P amplitude P^T: in the eigenbasis Sigma_pq = kappa(h_p+h_q) amplitude_pq
// with kappa(s) = 2 pi / (Gamma(1+s) sin(pi s / 2)).  Not every SPD matrix is
// a valid Sigma for a given H; this constructor always yields one (the
// induced covariance kernel is positive semidefinite by construction).
Mat sigma_for_amplitude(const HurstSpec& hurst, const Mat& amplitude);

// |x|^H Sigma |x|^{H^T}; |0|^H Sigma |0|^{H^T} is taken as the zero matrix.
Mat scaled_sigma(const OfbmParams& params, double x);

// E B_H(s) B_H(t)^T under time reversibility.
Mat ofbm_cov(const OfbmParams& params, double s, double t);

// E W_s W_{s+k}^T for the unit-lag increments, independent of s.
Mat increment_cov(const OfbmParams& params, std::int64_t k);

// Evaluation of u -> |u|^H Sigma |u|^{H^T} together with the closed-form
// antiderivatives needed to integrate it exactly against piecewise-linear
// weights.  Entries in the eigenbasis are m_pq |u|^{h_p+h_q}, so each
// integral is a matrix of scalar power-law integrals.
class PowerLawKernel {
public:
    explicit PowerLawKernel(const OfbmParams& params);

    int dim() const { return n_; }
    Mat eval(double x) const;

    // integral of w(u) * |u|^H Sigma |u|^{H^T} du where w is the piecewise
    // linear function with nodes u_start + i*step and values w[i].
    Mat integrate_linear(const std::vector<double>& w, double u_start, double step) const;

private:
    int n_;
    Mat p_, pt_;
    Mat m_; // P^{-1} Sigma P^{-T}
    std::vector<double> h_;
};

// EW(1) integrated exactly from the table's piecewise-constant psi; the
// remaining error is the cascade's convergence in the resolution.
Mat base_spectrum_raw(const OfbmParams& params, const PsiTable& psi);

// EW at dyadic scales via the exact operator scaling EW(s) = s^H EW(1) s^{H^T}.
// Construction computes EW(1) at the table resolution and one level finer and
// raises QuadratureError if the two disagree beyond rel_tol.
class SpectrumTable {
public:
    SpectrumTable(const OfbmParams& params, const PsiTable& psi, double rel_tol = 1e-6);

    const Mat& base() const { return base_; } // EW(1)
    Mat at_scale(double s) const;
    Mat at_octave(int j) const { return at_scale(std::ldexp(1.0, j)); }
    const OfbmParams& params() const { return params_; }

private:
    OfbmParams params_;
    Mat base_;
};

Mat wavelet_spectrum(const OfbmParams& params, const PsiTable& psi, int j);

// B(2^j) = P^{-1} EW(2^j) P^{-T}, symmetrized.
Mat b_matrix_from(const OfbmParams& params, const Mat& ew);
Mat b_matrix(const OfbmParams& params, const PsiTable& psi, int j);

struct TheoreticalEigen {
    double scale = 0.0;
    std::vector<double> lambda; // ascending eigenvalues of EW(scale)
    std::vector<double> h;      // h_p^E(scale) = log lambda_p / (2 log scale)
    double theta = std::numeric_limits<double>::quiet_NaN(); // n = 2 with EW_12 != 0
    bool theta_valid = false;
};

// Analytic centers of the estimators at scale a * 2^j; theta is filled for
// n = 2 unless the off-diagonal of EW(scale) vanishes (decoupled case).
TheoreticalEigen theoretical_eigen_h(const SpectrumTable& table, int j, std::int64_t a);

// theta(a 2^j); DegenerateOffDiagonal when the off-diagonal vanishes.
double theoretical_theta(const SpectrumTable& table, int j, std::int64_t a);

} // namespace ofbm

#endif
