#ifndef OFBM_FFT_HPP
#define OFBM_FFT_HPP

#include <complex>
#include <vector>

namespace ofbm {

// In-place iterative radix-2 FFT; length must be a power of two.
// Forward uses exp(-i 2 pi k n / N); inverse divides by N.
void fft(std::vector<std::complex<double>>& a, bool inverse);

namespace ref {
// O(N^2) DFT kept as the serial reference for tests and the benchmark.
std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& a,
                                            bool inverse);
} // namespace ref

} // namespace ofbm

#endif
