#ifndef OFBM_SYNTH_HPP
#define OFBM_SYNTH_HPP

#include <cstdint>

#include "ofbm/model.hpp"
#include "ofbm/path.hpp"

namespace ofbm {

// Exact OFGN synthesis by multivariate circulant embedding: the n x n
// covariance sequence increment_cov(k), |k| < M, is embedded into a
// block-circulant of period 2M (M starting at 2N and doubling to at most
// 16N until every spectral block is PSD up to clipping tolerance), the
// per-frequency blocks are factored, complex Gaussian noise is colored and
// inverse-transformed, and the first N samples of the real part are kept.
// Output is jointly Gaussian with lag-k covariance increment_cov(k) exactly
// in law, and is a deterministic function of (params, N, seed).
//
// The factorization depends only on (params, len); OfgnSynthesizer holds it
// so replicate loops pay it once.  draw() is const and safe to call
// concurrently.
class OfgnSynthesizer {
public:
    OfgnSynthesizer(const OfbmParams& params, std::int64_t len);

    SamplePath draw(std::uint64_t seed) const;
    std::int64_t period() const { return period_; }

private:
    int n_;
    std::int64_t len_;
    std::int64_t period_;
    std::vector<double> factors_; // symmetric factor per frequency f <= period/2
};

SamplePath synth_ofgn(const OfbmParams& params, std::int64_t len, std::uint64_t seed);

// Cumulative sums per component: the discrete OFBM sample B_H(1..N) with the
// implicit anchor B_H(0) = 0.  Differencing the output recovers the input.
SamplePath ofgn_to_ofbm(const SamplePath& increments);

} // namespace ofbm

#endif
