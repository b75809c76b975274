#ifndef OFBM_IO_HPP
#define OFBM_IO_HPP

#include <string>

#include "ofbm/asymvar.hpp"
#include "ofbm/config.hpp"
#include "ofbm/estim.hpp"
#include "ofbm/path.hpp"

namespace ofbm {

// Parameter files: key = value text with exact decimal round-trip.
void write_params_file(const std::string& path, const OfbmParams& params);
OfbmParams read_params_file(const std::string& path);

// CSV path: header "t,x1,...,xn", one row per sample.
void write_path_csv(const std::string& path, const SamplePath& sample);
SamplePath read_path_csv(const std::string& path);

// Compact binary path: little-endian 64-bit floats, row-major; shape and
// metadata live in the sidecar.
void write_path_binary(const std::string& path, const SamplePath& sample);
SamplePath read_path_binary(const std::string& path, int n, SamplePath::Kind kind);

// Sidecar metadata for either representation.
void write_path_meta(const std::string& path, const SamplePath& sample, const OfbmParams& params);

// Coefficient dump: CSV rows (j, k, component, value).
void write_coeffs_csv(const std::string& path, const WaveletCoeffs& coeffs);

// Per-octave report: j, K_j, upper triangle of W(2^j).
void write_variance_report(const std::string& path, const WaveletVariance& wv);

// Estimates per scale: scale, K, eigenvalues, h-hats, theta, eigenvectors,
// per-scale error flags; with a spectrum table, also the analytically
// centered h-hat_p - h_p^E(scale) diagnostics.
void write_estimate_report(const std::string& path, const EigenEstimates& est,
                           const SpectrumTable* table = nullptr);

void write_asymcov_report(const std::string& path, const AsymCov& cov);

} // namespace ofbm

#endif
