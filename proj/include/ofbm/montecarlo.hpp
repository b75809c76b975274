#ifndef OFBM_MONTECARLO_HPP
#define OFBM_MONTECARLO_HPP

#include <string>
#include <vector>

#include "ofbm/config.hpp"
#include "ofbm/estim.hpp"
#include "ofbm/path.hpp"

namespace ofbm {

// Largest octave the pyramid can produce with at least min_count interior
// coefficients for a series of the given length.
int max_octave(std::int64_t len, int taps, std::int64_t min_count = 2);

// synth -> pyramid -> normalize -> W tables, over octaves [1, j_hi].
WaveletVariance analyze_path(const SamplePath& levels, const FilterPair& filters, int j_hi);

struct ReplicateRow {
    int index = 0;
    bool failed = false;
    std::string error;
    std::vector<ScaleEstimate> octave_estimates; // octaves j_min..j_hi in order
};

struct ScaleAggregate {
    int octave = 0;
    double scale = 0.0;
    std::int64_t count = 0;           // K at this octave (first replicate)
    std::vector<double> mean_h, sd_h; // per eigenvalue index
    std::vector<double> mean_lambda;
    double mean_theta = 0.0, sd_theta = 0.0;
    int theta_replicates = 0;
    Mat mean_abs_evec;                // mean |p-hat_kl|
    std::vector<double> center_h;     // analytic centers h_p^E(2^j)
    double center_theta = 0.0;
    bool center_theta_valid = false;
};

struct VariancePrediction {
    bool available = false;
    int octave = 0;      // designated octave
    int j_base = 0;      // octave at which the asymptotic blocks are evaluated
    double var_h1 = 0.0; // diagonal of Sigma_{h1,h2}
    double var_h2 = 0.0;
    double var_theta = 0.0;
    bool theta_available = false;
    std::string note;
};

struct RunReport {
    ExperimentConfig config;
    int j_min = 0, j_hi = 0;
    std::vector<ReplicateRow> rows;
    std::vector<ScaleAggregate> aggregates;
    int qq_octave = 0;
    // Sorted standardized estimates paired with normal plotting quantiles.
    std::vector<std::pair<double, double>> qq_h2, qq_theta;
    VariancePrediction prediction;
    int failures = 0;
    double runtime_seconds = 0.0; // metadata only, kept out of report files
};

RunReport run_montecarlo(const ExperimentConfig& config);

// Writes config.cfg, replicates.csv, aggregate.csv, qq_*.csv, predictions.csv
// and the SVG panels into dir; runtime goes to runtime.txt so the data files
// are byte-identical across reruns of the same config.
void write_run_report(const std::string& dir, const RunReport& report);

} // namespace ofbm

#endif
