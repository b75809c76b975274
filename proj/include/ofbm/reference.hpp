#ifndef OFBM_REFERENCE_HPP
#define OFBM_REFERENCE_HPP

#include <cstdint>

#include "ofbm/model.hpp"
#include "ofbm/path.hpp"
#include "ofbm/wavelet.hpp"

// Serial reference implementations, deliberately written along independent
// routes from the production kernels.  Tests and the benchmark compare the
// two; none of these are used by the library itself.
namespace ofbm::ref {

// Continuous wavelet coefficients D(2^j, k) = int psi(z) B(2^j z + 2^j k) dz,
// integrating the sampled psi exactly against the piecewise-linear
// interpolant of the discrete path (with B(0) = 0 prepended).  Only interior
// shifts k are produced.  Output is already in the normalized convention.
OctaveCoeffs continuous_coeffs(const SamplePath& levels, const PsiTable& psi, int octave);

// EW(1) by a plain midpoint double sum over supp(psi)^2, with the matrix
// power evaluated at every node pair.
Mat midpoint_base_spectrum(const OfbmParams& params, const PsiTable& psi);

// Exact OFGN by Cholesky factorization of the full nN x nN covariance;
// O(N^3), for cross-checking the circulant embedding at small N.
SamplePath dense_ofgn(const OfbmParams& params, std::int64_t len, std::uint64_t seed);

} // namespace ofbm::ref

#endif
