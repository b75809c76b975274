#include "ofbm/io.hpp"

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>

namespace ofbm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::map<std::string, std::string> read_kv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

std::vector<double> split_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

} // namespace

void write_params_file(const std::string& path, const OfbmParams& params) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    const int n = params.dim();
    out << "n = " << n << "\n";
    out << "P = ";
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out << format_double(params.hurst.p(i, j)) << ((i == n - 1 && j == n - 1) ? "\n" : ", ");
    out << "h = ";
    for (int i = 0; i < n; ++i)
        out << format_double(params.hurst.h[i]) << (i + 1 < n ? ", " : "\n");
    const auto tri = vec_sym(params.sigma);
    out << "sigma = ";
    for (size_t i = 0; i < tri.size(); ++i)
        out << format_double(tri[i]) << (i + 1 < tri.size() ? ", " : "\n");
}

OfbmParams read_params_file(const std::string& path) {
    auto kv = read_kv(path);
    if (!kv.count("n") || !kv.count("P") || !kv.count("h") || !kv.count("sigma"))
        throw ConfigError("params file " + path + " is missing n/P/h/sigma");
    const int n = std::stoi(kv["n"]);
    const auto pvals = split_doubles(kv["P"]);
    if (static_cast<int>(pvals.size()) != n * n) throw ConfigError("P needs n*n entries");
    Mat p(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) p(i, j) = pvals[i * n + j];
    auto hurst = HurstSpec::make(p, split_doubles(kv["h"]));
    return OfbmParams::make(std::move(hurst), unvec_sym(split_doubles(kv["sigma"]), n));
}

void write_path_csv(const std::string& path, const SamplePath& sample) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "t";
    for (int c = 0; c < sample.n; ++c) out << ",x" << (c + 1);
    out << "\n";
    for (std::int64_t t = 0; t < sample.len; ++t) {
        out << t;
        for (int c = 0; c < sample.n; ++c) out << "," << format_double(sample.at(t, c));
        out << "\n";
    }
}

SamplePath read_path_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty path file " + path);
    int n = 0;
    for (char ch : line)
        if (ch == ',') ++n;
    if (n < 1) throw ConfigError("path file " + path + " has no component columns");

    SamplePath sample;
    sample.n = n;
    sample.kind = SamplePath::Kind::levels;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ','); // t column
        for (int c = 0; c < n; ++c) {
            if (!std::getline(ss, tok, ',')) throw ConfigError("short row in " + path);
            sample.values.push_back(std::stod(tok));
        }
        ++sample.len;
    }
    return sample;
}

void write_path_binary(const std::string& path, const SamplePath& sample) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(sample.values.data()),
              static_cast<std::streamsize>(sample.values.size() * sizeof(double)));
}

SamplePath read_path_binary(const std::string& path, int n, SamplePath::Kind kind) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw ConfigError("cannot open " + path);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    if (bytes % (n * sizeof(double)) != 0)
        throw ConfigError("binary path size is not a multiple of the row size");
    SamplePath sample;
    sample.n = n;
    sample.kind = kind;
    sample.len = static_cast<std::int64_t>(bytes / (n * sizeof(double)));
    sample.values.resize(bytes / sizeof(double));
    in.seekg(0);
    in.read(reinterpret_cast<char*>(sample.values.data()), static_cast<std::streamsize>(bytes));
    return sample;
}

void write_path_meta(const std::string& path, const SamplePath& sample,
                     const OfbmParams& params) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "kind = " << (sample.kind == SamplePath::Kind::levels ? "levels" : "increments")
        << "\n";
    out << "N = " << sample.len << "\n";
    out << "seed = " << sample.seed << "\n";
    out << "n = " << sample.n << "\n";
    out.close();
    write_params_file(path + ".params", params);
}

void write_coeffs_csv(const std::string& path, const WaveletCoeffs& coeffs) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "j,k,component,value\n";
    for (const auto& oc : coeffs.octaves)
        for (std::int64_t k = 0; k < oc.count; ++k)
            for (int c = 0; c < coeffs.n; ++c)
                out << oc.octave << "," << k << "," << (c + 1) << ","
                    << format_double(oc.detail[static_cast<size_t>(k) * coeffs.n + c]) << "\n";
}

void write_variance_report(const std::string& path, const WaveletVariance& wv) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "{\n  \"n\": " << wv.n << ",\n  \"octaves\": [\n";
    for (size_t i = 0; i < wv.octaves.size(); ++i) {
        const auto& ov = wv.octaves[i];
        out << "    {\"j\": " << ov.octave << ", \"K\": " << ov.count << ", \"W_upper\": [";
        const auto tri = vec_sym(ov.w);
        for (size_t t = 0; t < tri.size(); ++t)
            out << format_double(tri[t]) << (t + 1 < tri.size() ? ", " : "");
        out << "]}" << (i + 1 < wv.octaves.size() ? "," : "") << "\n";
    }
    out << "  ]\n}\n";
}

void write_estimate_report(const std::string& path, const EigenEstimates& est,
                           const SpectrumTable* table) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "n = " << est.n << "\n";
    for (const auto& s : est.per_scale) {
        out << "scale = " << format_double(s.scale) << "\n";
        out << "  K = " << s.count << "\n";
        if (s.failed) {
            out << "  error = " << s.error << "\n";
            continue;
        }
        if (table) {
            const Mat ew = table->at_scale(s.scale);
            const auto eig = (est.n == 2) ? std::vector<double>{sym_eig2(ew).lambda1,
                                                                sym_eig2(ew).lambda2}
                                          : sym_eig_n(ew).values;
            out << "  h_centered = ";
            for (size_t p = 0; p < s.h_hat.size(); ++p) {
                const double center = std::log(eig[p]) / (2.0 * std::log(s.scale));
                out << format_double(s.h_hat[p] - center)
                    << (p + 1 < s.h_hat.size() ? ", " : "\n");
            }
        }
        out << "  lambda = ";
        for (size_t i = 0; i < s.lambda.size(); ++i)
            out << format_double(s.lambda[i]) << (i + 1 < s.lambda.size() ? ", " : "\n");
        out << "  h = ";
        for (size_t i = 0; i < s.h_hat.size(); ++i)
            out << format_double(s.h_hat[i]) << (i + 1 < s.h_hat.size() ? ", " : "\n");
        if (s.theta_valid) out << "  theta = " << format_double(s.theta_hat) << "\n";
        out << "  eigenvectors = ";
        for (int i = 0; i < s.eigenvectors.rows(); ++i)
            for (int j = 0; j < s.eigenvectors.cols(); ++j)
                out << format_double(s.eigenvectors(i, j))
                    << ((i == s.eigenvectors.rows() - 1 && j == s.eigenvectors.cols() - 1)
                            ? "\n"
                            : ", ");
    }
}

void write_asymcov_report(const std::string& path, const AsymCov& cov) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << "n = " << cov.n << "\n";
    out << "octaves = ";
    for (size_t i = 0; i < cov.octaves.size(); ++i)
        out << cov.octaves[i] << (i + 1 < cov.octaves.size() ? ", " : "\n");
    out << "z_max = " << cov.z_max << "\n";
    out << "tail_ratio = " << format_double(cov.tail_ratio) << "\n";
    auto dump = [&](const char* name, const Mat& m) {
        out << name << " =";
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) out << " " << format_double(m(i, j));
        out << "\n";
    };
    dump("F", cov.f);
    dump("Sigma_B", cov.sigma_b);
    if (cov.sigma_h.rows() > 0) dump("Sigma_h", cov.sigma_h);
    for (size_t i = 0; i < cov.sigma_theta.size(); ++i)
        out << "sigma2_theta[j=" << cov.octaves[i] << "] = " << format_double(cov.sigma_theta[i])
            << "\n";
    for (const auto& note : cov.notes) out << "# " << note << "\n";
}

} // namespace ofbm
