#ifndef OFBM_WAVELET_HPP
#define OFBM_WAVELET_HPP

#include <vector>

#include "ofbm/mat.hpp"
#include "ofbm/path.hpp"

namespace ofbm {

enum class FilterVariant { extremal_phase, least_asymmetric };

// Orthonormal Daubechies filter pair with n_psi vanishing moments and
// 2*n_psi taps.  sum h = sqrt(2), shifts of h are orthonormal, and
// g_k = (-1)^k h_{2*n_psi-1-k}.
struct FilterPair {
    int n_psi = 0;
    FilterVariant variant = FilterVariant::extremal_phase;
    std::vector<double> h;
    std::vector<double> g;

    int taps() const { return 2 * n_psi; }
};

// Coefficients are computed by spectral factorization of the Daubechies
// half-band polynomial and then polished against the defining equations,
// so the FilterPair invariants hold to near machine precision.
FilterPair daubechies_filters(int n_psi, FilterVariant variant);

// phi and psi sampled as piecewise-constant functions on dyadic grids over
// supp = [0, 2*n_psi - 1].  phi comes from `resolution` cascade iterations
// started at the box indicator (cell width 2^-R); psi from one further
// refinement step, hence cell width 2^-(R+1).
struct PsiTable {
    int resolution = 0;     // R
    double phi_step = 0.0;  // 2^-R
    double psi_step = 0.0;  // 2^-(R+1)
    std::vector<double> phi;
    std::vector<double> psi;
    double a_phi = 0.0; // integral of phi
    FilterPair filters;

    double support_length() const { return 2.0 * filters.n_psi - 1.0; }
};

PsiTable cascade_psi(const FilterPair& filters, int resolution);

// Raw pyramid output for one octave: detail rows d~_{j,k} (K_j x n) plus the
// count of interior coefficients retained.
struct OctaveCoeffs {
    int octave = 0;
    std::int64_t count = 0;      // K_j
    std::vector<double> detail;  // count * n, row-major
    bool normalized = false;     // true once scaled to D~(2^j,k) = 2^{-j/2} d~
};

struct WaveletCoeffs {
    int n = 0;
    std::vector<OctaveCoeffs> octaves; // octave j = 1 .. j_max
};

// Mallat pyramid on a discrete sample, initialized with a_phi * B_H(k).
// Coefficients whose filter support touches either end of the available
// approximation array are discarded (no periodization or reflection).
WaveletCoeffs pyramid(const SamplePath& levels, const FilterPair& filters, int j_max,
                      double a_phi = 1.0);

// D~(2^j, k) = 2^{-j/2} d~_{j,k}, applied per octave.
void normalize_coeffs(WaveletCoeffs& coeffs);

struct OctaveVariance {
    int octave = 0;
    std::int64_t count = 0; // K_j
    Mat w;                  // W(2^j), n x n symmetric PSD
};

struct WaveletVariance {
    int n = 0;
    std::vector<OctaveVariance> octaves;

    const OctaveVariance* find(int octave) const {
        for (const auto& o : octaves)
            if (o.octave == octave) return &o;
        return nullptr;
    }
};

// W(2^j) = (1/K_j) sum_k D(2^j,k) D(2^j,k)^T from normalized coefficients.
// Octaves with fewer than min_count coefficients are dropped; if none remain,
// InsufficientData is raised.
WaveletVariance wavelet_variance(const WaveletCoeffs& coeffs, std::int64_t min_count = 2);

} // namespace ofbm

#endif
