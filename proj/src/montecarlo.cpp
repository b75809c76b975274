#include "ofbm/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "ofbm/asymvar.hpp"
#include "ofbm/rng.hpp"
#include "ofbm/stats.hpp"
#include "ofbm/svg.hpp"
#include "ofbm/synth.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ofbm {

int max_octave(std::int64_t len, int taps, std::int64_t min_count) {
    int j = 0;
    std::int64_t avail = len;
    while (true) {
        const std::int64_t next = (avail >= taps) ? (avail - taps) / 2 + 1 : 0;
        if (next < min_count) return j;
        avail = next;
        ++j;
    }
}

WaveletVariance analyze_path(const SamplePath& levels, const FilterPair& filters, int j_hi) {
    auto coeffs = pyramid(levels, filters, j_hi);
    normalize_coeffs(coeffs);
    return wavelet_variance(coeffs);
}

RunReport run_montecarlo(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
#ifdef _OPENMP
    if (config.threads > 0) omp_set_num_threads(config.threads);
#endif

    const auto params = config.params();
    const auto filters = config.filters();
    const auto psi = cascade_psi(filters, config.resolution);
    SpectrumTable spectrum(params, psi);

    RunReport report;
    report.config = config;
    report.j_min = config.j_min;
    report.j_hi = std::min(config.j_max, max_octave(config.len, filters.taps()));

    // Replicates: row r is a pure function of (config, seed ^ r), so the
    // parallel schedule cannot change the report.  The embedding factors are
    // shared read-only across the team.
    const OfgnSynthesizer synthesizer(params, config.len);
    const int r_count = config.replicates;
    report.rows.assign(r_count, ReplicateRow{});
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < r_count; ++r) {
        ReplicateRow row;
        row.index = r;
        try {
            const auto incr = synthesizer.draw(replicate_seed(config.seed, r));
            const auto wv = analyze_path(ofgn_to_ofbm(incr), filters, report.j_hi);
            const auto est = estimate_h(wv);
            for (const auto& se : est.per_scale) {
                const int oct = static_cast<int>(std::lround(std::log2(se.scale)));
                if (oct >= report.j_min && oct <= report.j_hi) row.octave_estimates.push_back(se);
            }
        } catch (const Error& e) {
            row.failed = true;
            row.error = e.what();
        }
        report.rows[r] = std::move(row);
    }
    for (const auto& row : report.rows)
        if (row.failed) ++report.failures;

    // Aggregates per octave, in fixed octave order.
    for (int oct = report.j_min; oct <= report.j_hi; ++oct) {
        ScaleAggregate agg;
        agg.octave = oct;
        agg.scale = std::ldexp(1.0, oct);
        agg.mean_abs_evec = Mat(config.n, config.n);

        std::vector<std::vector<double>> h_samples(config.n);
        std::vector<double> theta_samples;
        std::vector<std::vector<double>> lambda_samples(config.n);
        for (const auto& row : report.rows) {
            if (row.failed) continue;
            for (const auto& se : row.octave_estimates) {
                if (se.failed) continue;
                if (static_cast<int>(std::lround(std::log2(se.scale))) != oct) continue;
                if (agg.count == 0) agg.count = se.count;
                for (int p = 0; p < config.n; ++p) {
                    h_samples[p].push_back(se.h_hat[p]);
                    lambda_samples[p].push_back(se.lambda[p]);
                }
                if (se.theta_valid) theta_samples.push_back(se.theta_hat);
                for (int i = 0; i < config.n; ++i)
                    for (int j = 0; j < config.n; ++j)
                        agg.mean_abs_evec(i, j) += std::fabs(se.eigenvectors(i, j));
            }
        }
        if (h_samples[0].empty()) continue;
        const double inv = 1.0 / static_cast<double>(h_samples[0].size());
        agg.mean_abs_evec = agg.mean_abs_evec * inv;
        for (int p = 0; p < config.n; ++p) {
            agg.mean_h.push_back(mean(h_samples[p]));
            agg.sd_h.push_back(h_samples[p].size() > 1 ? std::sqrt(variance(h_samples[p])) : 0.0);
            agg.mean_lambda.push_back(mean(lambda_samples[p]));
        }
        agg.theta_replicates = static_cast<int>(theta_samples.size());
        if (agg.theta_replicates > 0) agg.mean_theta = mean(theta_samples);
        if (agg.theta_replicates > 1) agg.sd_theta = std::sqrt(variance(theta_samples));

        const auto te = theoretical_eigen_h(spectrum, oct, 1);
        agg.center_h = te.h;
        agg.center_theta = te.theta;
        agg.center_theta_valid = te.theta_valid;
        report.aggregates.push_back(std::move(agg));
    }

    // Designated qq octave: configured, else coarsest with K >= 32.
    report.qq_octave = config.qq_octave;
    if (report.qq_octave == 0) {
        for (const auto& agg : report.aggregates)
            if (agg.count >= 32) report.qq_octave = agg.octave;
    }

    // Asymptotic variance prediction at the designated octave (n = 2).
    if (config.n == 2 && report.qq_octave > 0) {
        try {
            AsymVarEngine engine(params, psi);
            const int jb = std::min(config.j_base, report.qq_octave);
            const Mat sh = engine.sigma_h({jb});
            report.prediction.available = true;
            report.prediction.octave = report.qq_octave;
            report.prediction.j_base = jb;
            report.prediction.var_h1 = sh(0, 0);
            report.prediction.var_h2 = sh(1, 1);
            try {
                report.prediction.var_theta = engine.sigma_theta(jb);
                report.prediction.theta_available = true;
            } catch (const Error& e) {
                report.prediction.note = e.what();
            }
        } catch (const Error& e) {
            report.prediction.note = e.what();
        }
    }

    // Standardized qq samples at the designated octave.
    if (report.qq_octave > 0) {
        const double scale = std::ldexp(1.0, report.qq_octave);
        const auto te = theoretical_eigen_h(spectrum, report.qq_octave, 1);
        std::vector<double> zh, zt;
        for (const auto& row : report.rows) {
            if (row.failed) continue;
            for (const auto& se : row.octave_estimates) {
                if (se.failed) continue;
                if (static_cast<int>(std::lround(std::log2(se.scale))) != report.qq_octave)
                    continue;
                const double root_k = std::sqrt(static_cast<double>(se.count));
                zh.push_back(2.0 * std::log(scale) * root_k * (se.h_hat.back() - te.h.back()));
                if (config.n == 2 && se.theta_valid && te.theta_valid) {
                    const double a_factor = scale / std::ldexp(1.0, report.prediction.j_base);
                    const double rate =
                        std::pow(a_factor, config.h.back() - config.h.front()) * root_k;
                    zt.push_back(rate * (se.theta_hat - te.theta));
                }
            }
        }
        auto standardize = [](std::vector<double>& v, double pred_var, bool have_pred) {
            if (v.size() < 3) return;
            const double m = mean(v);
            const double sd = have_pred ? std::sqrt(pred_var) : std::sqrt(variance(v));
            const double center = have_pred ? 0.0 : m;
            for (double& x : v) x = (x - center) / sd;
        };
        standardize(zh, report.prediction.var_h2, report.prediction.available);
        standardize(zt, report.prediction.var_theta,
                    report.prediction.available && report.prediction.theta_available);
        auto to_qq = [](std::vector<double> v) {
            std::sort(v.begin(), v.end());
            std::vector<std::pair<double, double>> out;
            for (size_t i = 0; i < v.size(); ++i)
                out.emplace_back(normal_quantile((i + 0.5) / static_cast<double>(v.size())),
                                 v[i]);
            return out;
        };
        report.qq_h2 = to_qq(zh);
        if (!zt.empty()) report.qq_theta = to_qq(zt);
    }

    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

namespace {

void write_aggregate_csv(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    const int n = report.config.n;
    out << "octave,scale,K";
    for (int p = 1; p <= n; ++p)
        out << ",mean_h" << p << ",sd_h" << p << ",center_h" << p << ",mean_lambda" << p;
    out << ",theta_replicates,mean_theta,sd_theta,center_theta\n";
    for (const auto& agg : report.aggregates) {
        out << agg.octave << "," << format_double(agg.scale) << "," << agg.count;
        for (int p = 0; p < n; ++p)
            out << "," << format_double(agg.mean_h[p]) << "," << format_double(agg.sd_h[p]) << ","
                << format_double(agg.center_h[p]) << "," << format_double(agg.mean_lambda[p]);
        out << "," << agg.theta_replicates << "," << format_double(agg.mean_theta) << ","
            << format_double(agg.sd_theta) << ","
            << (agg.center_theta_valid ? format_double(agg.center_theta) : "nan") << "\n";
    }
}

void write_replicates_csv(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    const int n = report.config.n;
    out << "replicate,octave,K";
    for (int p = 1; p <= n; ++p) out << ",lambda" << p << ",h" << p;
    out << ",theta,failed,error\n";
    for (const auto& row : report.rows) {
        if (row.failed) {
            out << row.index << ",,,";
            for (int p = 1; p <= n; ++p) out << ",,";
            out << ",1," << row.error << "\n";
            continue;
        }
        for (const auto& se : row.octave_estimates) {
            if (se.failed) {
                out << row.index << "," << static_cast<int>(std::lround(std::log2(se.scale)))
                    << "," << se.count;
                for (int p = 1; p <= n; ++p) out << ",,";
                out << ",nan,1," << se.error << "\n";
                continue;
            }
            out << row.index << "," << static_cast<int>(std::lround(std::log2(se.scale))) << ","
                << se.count;
            for (int p = 0; p < n; ++p)
                out << "," << format_double(se.lambda[p]) << "," << format_double(se.h_hat[p]);
            out << "," << (se.theta_valid ? format_double(se.theta_hat) : "nan") << ",0,\n";
        }
    }
}

void write_qq_csv(const std::string& path, const std::vector<std::pair<double, double>>& qq) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "normal_quantile,standardized_value\n";
    for (const auto& [q, v] : qq)
        out << format_double(q) << "," << format_double(v) << "\n";
}

void write_estimate_panels(const std::string& dir, const RunReport& report) {
    const int n = report.config.n;
    const int r_used = report.config.replicates - report.failures;
    for (int p = 0; p < n; ++p) {
        SvgSeries meanline{"mean h" + std::to_string(p + 1), "#000000", true, false, {}};
        SvgSeries lo{"", "#777777", true, false, {}}, hi{"", "#777777", true, false, {}};
        SvgSeries center{"analytic center", "#cc0000", true, true, {}};
        SvgSeries truth{"h" + std::to_string(p + 1), "#2255cc", true, true, {}};
        for (const auto& agg : report.aggregates) {
            const double band = agg.sd_h[p] / std::sqrt(std::max(1, r_used));
            meanline.points.emplace_back(agg.octave, agg.mean_h[p]);
            lo.points.emplace_back(agg.octave, agg.mean_h[p] - band);
            hi.points.emplace_back(agg.octave, agg.mean_h[p] + band);
            center.points.emplace_back(agg.octave, agg.center_h[p]);
            truth.points.emplace_back(agg.octave, report.config.h[p]);
        }
        write_svg_plot(dir + "/fig_h" + std::to_string(p + 1) + ".svg",
                       "h" + std::to_string(p + 1) + " estimates vs octave",
                       {meanline, lo, hi, center, truth});
    }
    if (n == 2) {
        SvgSeries meanline{"mean -theta", "#000000", true, false, {}};
        SvgSeries center{"analytic -theta", "#cc0000", true, true, {}};
        for (const auto& agg : report.aggregates) {
            if (agg.theta_replicates == 0) continue;
            meanline.points.emplace_back(agg.octave, -agg.mean_theta);
            if (agg.center_theta_valid)
                center.points.emplace_back(agg.octave, -agg.center_theta);
        }
        write_svg_plot(dir + "/fig_theta.svg", "-theta estimates vs octave", {meanline, center});
    }
    auto qq_panel = [&](const std::string& name,
                        const std::vector<std::pair<double, double>>& qq) {
        if (qq.empty()) return;
        SvgSeries pts{"sample", "#000000", false, false, qq};
        SvgSeries ref{"N(0,1)", "#cc0000", true, true, {}};
        ref.points.emplace_back(qq.front().first, qq.front().first);
        ref.points.emplace_back(qq.back().first, qq.back().first);
        write_svg_plot(dir + "/" + name + ".svg", "qq plot (" + name + ")", {pts, ref});
    };
    qq_panel("qq_h2", report.qq_h2);
    qq_panel("qq_theta", report.qq_theta);
}

} // namespace

void write_run_report(const std::string& dir, const RunReport& report) {
    std::filesystem::create_directories(dir);
    write_config_file(dir + "/config.cfg", report.config);
    write_replicates_csv(dir + "/replicates.csv", report);
    write_aggregate_csv(dir + "/aggregate.csv", report);
    write_qq_csv(dir + "/qq_h2.csv", report.qq_h2);
    write_qq_csv(dir + "/qq_theta.csv", report.qq_theta);
    {
        std::ofstream out(dir + "/predictions.csv");
        out << "available,octave,j_base,var_h1,var_h2,theta_available,var_theta,note\n";
        const auto& p = report.prediction;
        out << p.available << "," << p.octave << "," << p.j_base << ","
            << format_double(p.var_h1) << "," << format_double(p.var_h2) << ","
            << p.theta_available << "," << format_double(p.var_theta) << "," << p.note << "\n";
    }
    {
        std::ofstream out(dir + "/phat.csv");
        out << "octave";
        for (int i = 1; i <= report.config.n; ++i)
            for (int j = 1; j <= report.config.n; ++j) out << ",abs_p" << i << j;
        out << "\n";
        for (const auto& agg : report.aggregates) {
            out << agg.octave;
            for (int i = 0; i < report.config.n; ++i)
                for (int j = 0; j < report.config.n; ++j)
                    out << "," << format_double(agg.mean_abs_evec(i, j));
            out << "\n";
        }
    }
    {
        std::ofstream out(dir + "/failures.txt");
        out << report.failures << "\n";
        for (const auto& row : report.rows)
            if (row.failed) out << row.index << ": " << row.error << "\n";
    }
    write_estimate_panels(dir, report);
    std::ofstream rt(dir + "/runtime.txt");
    rt << report.runtime_seconds << "\n";
}

} // namespace ofbm
