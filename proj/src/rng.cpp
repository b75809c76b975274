#include "ofbm/rng.hpp"

#include <cmath>

namespace ofbm {

double CounterRng::next_gaussian() {
    if (have_gauss_spare_) {
        have_gauss_spare_ = false;
        return gauss_spare_;
    }
    // u1 in (0,1] so the log is finite.
    const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925287;
    gauss_spare_ = r * std::sin(two_pi * u2);
    have_gauss_spare_ = true;
    return r * std::cos(two_pi * u2);
}

} // namespace ofbm
