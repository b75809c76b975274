#ifndef OFBM_ASYMVAR_HPP
#define OFBM_ASYMVAR_HPP

#include <map>
#include <string>
#include <vector>

#include "ofbm/mat.hpp"
#include "ofbm/model.hpp"

namespace ofbm {

// Numerical evaluation of the limiting covariance structure of the sample
// wavelet variance and the estimators built on it.  The lag family
//   Omega_{j,j'}(z) = -1/2 iint psi(t) psi(t')
//       |2^j t - 2^{j'} t' + z gcd(2^j,2^{j'})|^H Sigma |...|^{H^T} dt' dt
// reduces to a scale-free core indexed by d = |j - j'| conjugated by
// 2^{min(j,j') H}; cores are cached per d.
class AsymVarEngine {
public:
    AsymVarEngine(const OfbmParams& params, const PsiTable& psi);

    const OfbmParams& params() const { return params_; }
    const SpectrumTable& spectrum() const { return spectrum_; }

    // Omega_{j,j'}(z) (exact covariance of wavelet coefficients whose shifts
    // satisfy 2^j k - 2^{j'} k' = z gcd).
    Mat omega(int j, int jp, int z) const;

    struct BlockDiagnostics {
        int z_max = 0;
        double tail_ratio = 0.0;
    };

    // G_{jj'}: Isserlis limit of sqrt(K_j K_j') Cov(vec_sym W(2^j), vec_sym W(2^j')),
    // truncated adaptively (minimum |z| <= 64, tail criterion 1e-8).
    Mat g_block(int j, int jp, BlockDiagnostics* diag = nullptr) const;

    // F = (G_{jj'}) over the octave list.
    Mat f_matrix(const std::vector<int>& octaves, BlockDiagnostics* diag = nullptr) const;

    // Sigma_B = diag_m(Pmap) F diag_m(Pmap)^T with Pmap the congruence map of P^{-1}.
    Mat sigma_B(const std::vector<int>& octaves) const;

    // Sigma_{h1,h2} = Q Sigma_B Q^T; 2x3 diagonal blocks built from B(2^j).
    Mat sigma_h(const std::vector<int>& octaves) const;

    // sigma^2_theta = R^T Sigma_B(2^j) R at octave j; requires p22 != 0,
    // p12 != 0 and b12(2^j) != 0.
    double sigma_theta(int j) const;

private:
    struct Core {
        std::vector<Mat> by_z; // core(z), z = -z_max..z_max
        int z_max = 0;
        double tail_ratio = 0.0;
    };

    const Core& core_for(int delta) const;
    Mat core_at(int delta, int z) const;
    Mat b_at(int j) const;

    OfbmParams params_;
    PowerLawKernel kernel_;
    SpectrumTable spectrum_;
    double step_;
    std::vector<double> psi_cells_;
    mutable std::map<int, Core> cores_;
};

struct AsymCov {
    int n = 0;
    std::vector<int> octaves;
    Mat f;
    Mat sigma_b;
    Mat sigma_h;                      // 2m x 2m
    std::vector<double> sigma_theta;  // per octave; NaN where preconditions fail
    std::vector<std::string> notes;   // one entry per failed sigma_theta octave
    int z_max = 0;
    double tail_ratio = 0.0;
};

AsymCov asym_cov(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves);

// Free-function forms of the individual operations.
Mat omega(const OfbmParams& params, const PsiTable& psi, int j, int jp, int z);
Mat g_block(const OfbmParams& params, const PsiTable& psi, int j, int jp);
Mat sigma_B(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves);
Mat sigma_h(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves);
double sigma_theta(const OfbmParams& params, const PsiTable& psi, int j);

} // namespace ofbm

#endif
