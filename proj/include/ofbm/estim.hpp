#ifndef OFBM_ESTIM_HPP
#define OFBM_ESTIM_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "ofbm/mat.hpp"
#include "ofbm/wavelet.hpp"

namespace ofbm {

// Analysis scale s = a * 2^j with dyadic a, chosen so K_{a,j} = nu / s >= 8.
struct ScalePlan {
    std::int64_t nu = 0;
    int j_base = 0;
    std::int64_t a = 1;

    double scale() const { return static_cast<double>(a) * std::ldexp(1.0, j_base); }
    int octave() const;
    std::int64_t ideal_count() const { return nu / (a << j_base); }
};

// Largest dyadic a with nu / (a 2^j) >= 8; falls back to a = 1.
ScalePlan choose_scale(std::int64_t nu, int j_base);

// Estimates at one analysis scale.
struct ScaleEstimate {
    double scale = 0.0;
    std::int64_t count = 0;         // coefficients actually averaged into W
    std::vector<double> lambda;     // ascending eigenvalues of W(scale)
    std::vector<double> h_hat;      // log lambda_p / (2 log scale)
    double theta_hat = std::numeric_limits<double>::quiet_NaN(); // n = 2, b-hat != 0
    bool theta_valid = false;
    Mat eigenvectors;               // unit columns aligned with lambda
    bool failed = false;            // per-scale error flag (multi-scale reports)
    std::string error;
};

// Estimates across every octave present in the variance table (scale 2^j).
struct EigenEstimates {
    int n = 0;
    std::vector<ScaleEstimate> per_scale;
};

// Eigenvalue estimates at the plan's scale; NonPositiveEigenvalue if the
// smallest eigenvalue of W is <= 0 (never clamped).
ScaleEstimate estimate_at(const WaveletVariance& wv, const ScalePlan& plan);

// Per-octave table; octaves whose W is not positive definite are flagged
// rather than clamped, and the rest of the table is still produced.
EigenEstimates estimate_h(const WaveletVariance& wv);

// Optional post-processor (not the estimator the asymptotics are stated
// for): K-weighted average of h-hat_p over the octaves in [j_min, j_max].
std::vector<double> weighted_multiscale_h(const EigenEstimates& est, int j_min, int j_max);

// theta-hat = (lambda_1 - W_11) / W_12 at the plan's scale (n = 2).
double estimate_theta(const WaveletVariance& wv, const ScalePlan& plan);

// Eigenvector-based estimate of an orthogonal mixing matrix: column p is the
// unit eigenvector for lambda_p, signs fixed by the first-nonzero-positive
// convention.  Caller asserts P in O(2).
Mat estimate_P_orthogonal(const WaveletVariance& wv, const ScalePlan& plan);

// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x, const std::vector<double>& y);

// Entrywise log2 |W(2^j)_{i1,i2}| slopes over the available octaves: the
// univariate-style baseline whose components are all driven by the dominant
// Hurst eigenvalue.
Mat entrywise_log_slopes(const WaveletVariance& wv, int j_min, int j_max);

} // namespace ofbm

#endif
