#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "ofbm/asymvar.hpp"
#include "ofbm/io.hpp"
#include "ofbm/montecarlo.hpp"
#include "ofbm/rng.hpp"
#include "ofbm/stats.hpp"
#include "ofbm/svg.hpp"
#include "ofbm/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ofbm;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::string preset;
    std::string path_file;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int replicates = 0;
    int threads = 0;
};

ExperimentConfig load_config(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty())
        cfg = read_config_file(opts.config_path);
    else if (!opts.preset.empty())
        cfg = preset_config(opts.preset);
    else
        throw ConfigError("either --config or --preset is required");
    if (!opts.preset.empty() && opts.config_path.empty()) cfg.preset = opts.preset;
    if (opts.seed_set) cfg.seed = opts.seed;
    if (opts.replicates > 0) cfg.replicates = opts.replicates;
    if (opts.threads > 0) cfg.threads = opts.threads;
    if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
#ifdef _OPENMP
    if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#endif
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

int cmd_synth(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto params = cfg.params();
    const auto incr = synth_ofgn(params, cfg.len, cfg.seed);
    const auto levels = ofgn_to_ofbm(incr);
    write_path_csv(cfg.out_dir + "/path.csv", levels);
    write_path_binary(cfg.out_dir + "/path.bin", levels);
    write_path_meta(cfg.out_dir + "/path.meta", levels, params);
    write_path_csv(cfg.out_dir + "/increments.csv", incr);
    std::cout << "wrote " << cfg.out_dir << "/path.csv (" << levels.len << " x " << levels.n
              << ", seed " << cfg.seed << ")\n";
    return 0;
}

WaveletVariance analyze_file(const ExperimentConfig& cfg, const std::string& path_file,
                             WaveletCoeffs* coeffs_out = nullptr) {
    SamplePath levels = read_path_csv(path_file);
    levels.kind = SamplePath::Kind::levels;
    const auto filters = cfg.filters();
    const int j_hi = std::min(cfg.j_max, max_octave(levels.len, filters.taps()));
    auto coeffs = pyramid(levels, filters, j_hi);
    normalize_coeffs(coeffs);
    if (coeffs_out) *coeffs_out = coeffs;
    return wavelet_variance(coeffs);
}

int cmd_analyze(const CommonOpts& opts, bool dump_coeffs) {
    const auto cfg = load_config(opts);
    if (opts.path_file.empty()) throw ConfigError("analyze needs --path FILE");
    WaveletCoeffs coeffs;
    const auto wv = analyze_file(cfg, opts.path_file, dump_coeffs ? &coeffs : nullptr);
    write_variance_report(cfg.out_dir + "/variance.json", wv);
    if (dump_coeffs) write_coeffs_csv(cfg.out_dir + "/coeffs.csv", coeffs);

    // Entrywise log2 W(2^j) regression baseline.
    const int j_lo = cfg.j_min;
    const int j_hi = wv.octaves.back().octave;
    const Mat slopes = entrywise_log_slopes(wv, j_lo, j_hi);
    std::ofstream out(cfg.out_dir + "/entrywise_slopes.csv");
    out << "i,j,slope\n";
    for (int i = 0; i < wv.n; ++i)
        for (int j = i; j < wv.n; ++j)
            out << (i + 1) << "," << (j + 1) << "," << format_double(slopes(i, j)) << "\n";
    std::cout << "wrote " << cfg.out_dir << "/variance.json over octaves 1.." << j_hi << "\n";
    return 0;
}

int cmd_estimate(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    if (opts.path_file.empty()) throw ConfigError("estimate needs --path FILE");
    const auto wv = analyze_file(cfg, opts.path_file);
    const auto est = estimate_h(wv);
    SpectrumTable table(cfg.params(), cascade_psi(cfg.filters(), cfg.resolution));
    write_estimate_report(cfg.out_dir + "/estimates.txt", est, &table);
    std::cout << "wrote " << cfg.out_dir << "/estimates.txt\n";
    return 0;
}

int cmd_asymvar(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto params = cfg.params();
    const auto psi = cascade_psi(cfg.filters(), cfg.resolution);
    std::vector<int> octaves;
    for (int j = cfg.j_base; j <= std::min(cfg.j_max, cfg.j_base + 3); ++j) octaves.push_back(j);
    const auto cov = asym_cov(params, psi, octaves);
    write_asymcov_report(cfg.out_dir + "/asymcov.txt", cov);
    std::cout << "wrote " << cfg.out_dir << "/asymcov.txt (z_max " << cov.z_max << ")\n";
    return 0;
}

int cmd_montecarlo(const CommonOpts& opts) {
    const auto cfg = load_config(opts);
    const auto report = run_montecarlo(cfg);
    write_run_report(cfg.out_dir, report);
    std::cout << "montecarlo: " << cfg.replicates << " replicates, " << report.failures
              << " failures, qq octave " << report.qq_octave << ", "
              << report.runtime_seconds << " s\n";
    return 0;
}

// Figure-1 style study: eigenvalue vs entrywise scaling from repeated
// single-path analyses.
int reproduce_fig1(ExperimentConfig cfg) {
    const auto params = cfg.params();
    const auto filters = cfg.filters();
    const int j_lo = 7, j_hi = 11;

    const int seeds = cfg.replicates;
    std::vector<double> slope_l1(seeds), slope_l2(seeds);
    std::vector<Mat> entry_slopes(seeds);
    std::vector<std::vector<double>> curves_l1(seeds), curves_l2(seeds);
    const OfgnSynthesizer synthesizer(params, cfg.len);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < seeds; ++r) {
        const auto incr = synthesizer.draw(replicate_seed(cfg.seed, r));
        const auto wv = analyze_path(ofgn_to_ofbm(incr), filters, j_hi);
        std::vector<double> js, l1, l2;
        for (const auto& ov : wv.octaves) {
            if (ov.octave < j_lo || ov.octave > j_hi) continue;
            const auto e = sym_eig2(ov.w);
            js.push_back(ov.octave);
            l1.push_back(std::log2(e.lambda1));
            l2.push_back(std::log2(e.lambda2));
        }
        slope_l1[r] = regression_slope(js, l1);
        slope_l2[r] = regression_slope(js, l2);
        entry_slopes[r] = entrywise_log_slopes(wv, j_lo, j_hi);
        curves_l1[r] = l1;
        curves_l2[r] = l2;
    }

    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(cfg.out_dir + "/fig1_slopes.csv");
    out << "seed,slope_log2_lambda1,slope_log2_lambda2,slope_w11,slope_w12,slope_w22\n";
    for (int r = 0; r < seeds; ++r)
        out << r << "," << format_double(slope_l1[r]) << "," << format_double(slope_l2[r]) << ","
            << format_double(entry_slopes[r](0, 0)) << "," << format_double(entry_slopes[r](0, 1))
            << "," << format_double(entry_slopes[r](1, 1)) << "\n";

    // Mean curves with the asymptotic trends superimposed.
    SvgSeries c1{"log2 lambda1", "#000000", true, false, {}};
    SvgSeries c2{"log2 lambda2", "#555555", true, false, {}};
    SvgSeries t1{"slope 2 h1", "#cc0000", true, true, {}};
    SvgSeries t2{"slope 2 h2", "#2255cc", true, true, {}};
    std::ofstream curves(cfg.out_dir + "/fig1_curves.csv");
    curves << "octave,mean_log2_lambda1,mean_log2_lambda2\n";
    for (int j = j_lo; j <= j_hi; ++j) {
        double m1 = 0.0, m2 = 0.0;
        for (int r = 0; r < seeds; ++r) {
            m1 += curves_l1[r][j - j_lo];
            m2 += curves_l2[r][j - j_lo];
        }
        m1 /= seeds;
        m2 /= seeds;
        curves << j << "," << format_double(m1) << "," << format_double(m2) << "\n";
        c1.points.emplace_back(j, m1);
        c2.points.emplace_back(j, m2);
    }
    const double b1 = c1.points.front().second, b2 = c2.points.front().second;
    for (int j = j_lo; j <= j_hi; ++j) {
        t1.points.emplace_back(j, b1 + 2 * cfg.h[0] * (j - j_lo));
        t2.points.emplace_back(j, b2 + 2 * cfg.h[1] * (j - j_lo));
    }
    write_svg_plot(cfg.out_dir + "/fig1_eigen.svg", "eigenvalue scaling", {c1, c2, t1, t2});

    const double m_l1 = mean(slope_l1), m_l2 = mean(slope_l2);
    std::cout << "fig1: mean slope log2(lambda1) = " << m_l1 << " (2 h1 = " << 2 * cfg.h[0]
              << "), log2(lambda2) = " << m_l2 << " (2 h2 = " << 2 * cfg.h[1] << ")\n";
    return 0;
}

int cmd_reproduce(const CommonOpts& opts) {
    auto cfg = load_config(opts);
    if (cfg.preset.empty()) throw ConfigError("reproduce needs --preset");
    if (cfg.preset == "fig1") return reproduce_fig1(cfg);

    const auto report = run_montecarlo(cfg);
    write_run_report(cfg.out_dir, report);

    if (cfg.preset == "fig5") {
        // Entrywise |P-hat| panels against the true |p_kl|.
        const auto params = cfg.params();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                SvgSeries est{"mean |p-hat|", "#000000", true, false, {}};
                SvgSeries truth{"|p|", "#cc0000", true, true, {}};
                for (const auto& agg : report.aggregates) {
                    est.points.emplace_back(agg.octave, agg.mean_abs_evec(i, j));
                    truth.points.emplace_back(agg.octave, std::fabs(params.hurst.p(i, j)));
                }
                write_svg_plot(cfg.out_dir + "/fig_p" + std::to_string(i + 1) +
                                   std::to_string(j + 1) + ".svg",
                               "P entry recovery", {est, truth});
            }
    }
    std::cout << "reproduce " << cfg.preset << ": qq octave " << report.qq_octave << ", "
              << report.failures << " failures, " << report.runtime_seconds << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator fractional Brownian motion: synthesis, wavelet eigen-analysis, "
                 "Hurst estimation, asymptotic variances, Monte Carlo studies"};
    app.require_subcommand(1);

    CommonOpts opts;
    bool dump_coeffs = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "experiment config file");
        sub->add_option("--out", opts.out_dir, "output directory");
        sub->add_option("--preset", opts.preset, "parameter preset (fig1..fig5, n4)");
        sub->add_option("--seed", opts.seed, "base RNG seed")->each([&](const std::string&) {
            opts.seed_set = true;
        });
        sub->add_option("--replicates", opts.replicates, "replicate count");
        sub->add_option("--threads", opts.threads, "worker threads (0 = default)");
    };

    auto* synth = app.add_subcommand("synth", "synthesize an OFBM path");
    add_common(synth);
    auto* analyze = app.add_subcommand("analyze", "wavelet variance of a path file");
    add_common(analyze);
    analyze->add_option("--path", opts.path_file, "CSV path file");
    analyze->add_flag("--dump-coeffs", dump_coeffs, "write the coefficient dump");
    auto* estimate = app.add_subcommand("estimate", "Hurst eigen-estimates of a path file");
    add_common(estimate);
    estimate->add_option("--path", opts.path_file, "CSV path file");
    auto* asym = app.add_subcommand("asymvar", "asymptotic covariance report");
    add_common(asym);
    auto* mc = app.add_subcommand("montecarlo", "seeded Monte Carlo study");
    add_common(mc);
    auto* rep = app.add_subcommand("reproduce", "reproduce a simulation-study figure");
    add_common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (app.exit(e) == 0) return 0;
        nlohmann::json err{{"code", "CliParseError"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(opts);
        if (analyze->parsed()) return cmd_analyze(opts, dump_coeffs);
        if (estimate->parsed()) return cmd_estimate(opts);
        if (asym->parsed()) return cmd_asymvar(opts);
        if (mc->parsed()) return cmd_montecarlo(opts);
        if (rep->parsed()) return cmd_reproduce(opts);
    } catch (const ConfigError& e) {
        nlohmann::json err{{"code", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const Error& e) {
        nlohmann::json err{{"code", e.code()}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    } catch (const std::exception& e) {
        nlohmann::json err{{"code", "InternalError"}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return 3;
    }
    return 0;
}
