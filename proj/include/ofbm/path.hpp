#ifndef OFBM_PATH_HPP
#define OFBM_PATH_HPP

#include <cstdint>
#include <vector>

#include "ofbm/errors.hpp"

namespace ofbm {

// A multivariate sample path, row-major (sample index fastest over components).
// kind distinguishes stationary increments (OFGN) from cumulated levels
// (discrete OFBM, with the implicit anchor B_H(0) = 0 before the first row).
struct SamplePath {
    enum class Kind { increments, levels };

    int n = 0;
    std::int64_t len = 0;
    std::vector<double> values; // len * n
    std::uint64_t seed = 0;
    Kind kind = Kind::increments;

    double& at(std::int64_t t, int comp) { return values[static_cast<size_t>(t) * n + comp]; }
    double at(std::int64_t t, int comp) const { return values[static_cast<size_t>(t) * n + comp]; }
};

} // namespace ofbm

#endif
