#ifndef OFBM_STATS_HPP
#define OFBM_STATS_HPP

#include <cstddef>
#include <vector>

namespace ofbm {

double mean(const std::vector<double>& v);
double variance(const std::vector<double>& v); // unbiased

// Inverse standard normal CDF (Acklam's rational approximation polished by
// one Halley step against erfc), accurate to ~1e-15.
double normal_quantile(double p);

// Pearson correlation between the sorted sample and the normal quantiles at
// plotting positions (i - 1/2) / n.
double qq_correlation(std::vector<double> sample);

// Jarque-Bera statistic n (skew^2 / 6 + (kurt - 3)^2 / 24); ~ chi^2_2 under
// normality.  The 1% critical value is 9.21.
double jarque_bera(const std::vector<double>& sample);

} // namespace ofbm

#endif
