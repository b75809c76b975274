#include "ofbm/asymvar.hpp"

#include <cmath>
#include <cstdint>
#include <string>

#include "ofbm/matfun.hpp"

namespace ofbm {

namespace {

// Cross-correlation nodes chi(m step) = step * sum_a xi[a] psi[a-m] of the
// dilated copy xi(v) = 2^-d psi(2^-d v) against psi, both piecewise constant
// on the step grid.  chi is piecewise linear between nodes, exactly.
std::vector<double> cross_correlation(const std::vector<double>& psi, double step, int delta) {
    const std::int64_t c = static_cast<std::int64_t>(psi.size());
    const std::int64_t cx = c << delta;
    const double shrink = std::ldexp(1.0, -delta);
    const std::int64_t lo = -(c - 1), hi = cx - 1;
    std::vector<double> chi(static_cast<size_t>(hi - lo + 1), 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = lo; m <= hi; ++m) {
        const std::int64_t a0 = std::max<std::int64_t>(m, 0);
        const std::int64_t a1 = std::min<std::int64_t>(m + c - 1, cx - 1);
        double acc = 0.0;
        for (std::int64_t a = a0; a <= a1; ++a)
            acc += psi[static_cast<size_t>(a >> delta)] * psi[static_cast<size_t>(a - m)];
        chi[static_cast<size_t>(m - lo)] = acc * shrink * step;
    }
    return chi;
}

// Frobenius norm of the Isserlis accumulation of a single lag, used for the
// truncation criterion; proportional to ||core(z)||_F^2.
double lag_weight(const Mat& m) {
    const double f = frob_norm(m);
    return f * f;
}

} // namespace

AsymVarEngine::AsymVarEngine(const OfbmParams& params, const PsiTable& psi)
    : params_(params),
      kernel_(params),
      spectrum_(params, psi),
      step_(psi.psi_step),
      psi_cells_(psi.psi) {}

Mat AsymVarEngine::core_at(int delta, int z) const {
    const auto chi = cross_correlation(psi_cells_, step_, delta);
    const double u_start = -(static_cast<double>(psi_cells_.size()) - 1.0) * step_;
    return kernel_.integrate_linear(chi, u_start + static_cast<double>(z), step_) * (-0.5);
}

const AsymVarEngine::Core& AsymVarEngine::core_for(int delta) const {
    auto it = cores_.find(delta);
    if (it != cores_.end()) return it->second;

    const auto chi = cross_correlation(psi_cells_, step_, delta);
    const double u_start = -(static_cast<double>(psi_cells_.size()) - 1.0) * step_;
    auto eval = [&](int z) {
        return kernel_.integrate_linear(chi, u_start + static_cast<double>(z), step_) * (-0.5);
    };

    Core core;
    int z_max = 64;
    constexpr int kCap = 8192;
    while (true) {
        core.by_z.assign(2 * z_max + 1, Mat());
#pragma omp parallel for schedule(dynamic)
        for (int z = -z_max; z <= z_max; ++z) core.by_z[static_cast<size_t>(z + z_max)] = eval(z);

        double total = 0.0;
        for (const auto& m : core.by_z) total += lag_weight(m);
        const double tail = lag_weight(core.by_z.front()) + lag_weight(core.by_z.back());
        core.z_max = z_max;
        core.tail_ratio = tail / total;
        if (core.tail_ratio < 1e-8) break;
        if (z_max >= kCap)
            throw TailNotConverged("omega series tail ratio " + std::to_string(core.tail_ratio) +
                                       " at z_max " + std::to_string(z_max),
                                   z_max);
        z_max *= 2;
    }
    return cores_.emplace(delta, std::move(core)).first->second;
}

Mat AsymVarEngine::omega(int j, int jp, int z) const {
    const int m = std::min(j, jp);
    const int delta = std::abs(j - jp);
    const int zz = (j >= jp) ? z : -z;
    Mat core;
    const auto it = cores_.find(delta);
    if (it != cores_.end() && std::abs(zz) <= it->second.z_max)
        core = it->second.by_z[static_cast<size_t>(zz + it->second.z_max)];
    else
        core = core_at(delta, zz);
    const Mat pw = params_.hurst.power(std::ldexp(1.0, m));
    return pw * core * pw.transpose();
}

Mat AsymVarEngine::g_block(int j, int jp, BlockDiagnostics* diag) const {
    const int n = params_.dim();
    const int q = n * (n + 1) / 2;
    const int m = std::min(j, jp);
    const int delta = std::abs(j - jp);
    const Core& core = core_for(delta);

    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < n; ++i)
        for (int k = i; k < n; ++k) slots.emplace_back(i, k);

    const Mat pw = params_.hurst.power(std::ldexp(1.0, m));
    const Mat pwt = pw.transpose();

    Mat g(q, q);
    for (int zi = 0; zi < static_cast<int>(core.by_z.size()); ++zi) {
        const int idx = (j >= jp) ? zi : (2 * core.z_max - zi);
        const Mat om = pw * core.by_z[static_cast<size_t>(idx)] * pwt;
        for (int r = 0; r < q; ++r) {
            const auto [i1, i2] = slots[r];
            for (int c = 0; c < q; ++c) {
                const auto [q1, q2] = slots[c];
                g(r, c) += om(i1, q1) * om(i2, q2) + om(i1, q2) * om(i2, q1);
            }
        }
    }

    const double rate = std::ldexp(1.0, m) / std::sqrt(std::ldexp(1.0, j) * std::ldexp(1.0, jp));
    if (diag) {
        diag->z_max = core.z_max;
        diag->tail_ratio = core.tail_ratio;
    }
    return g * rate;
}

Mat AsymVarEngine::f_matrix(const std::vector<int>& octaves, BlockDiagnostics* diag) const {
    const int n = params_.dim();
    const int q = n * (n + 1) / 2;
    const int m = static_cast<int>(octaves.size());
    Mat f(q * m, q * m);
    BlockDiagnostics worst{};
    for (int bi = 0; bi < m; ++bi)
        for (int bj = 0; bj < m; ++bj) {
            BlockDiagnostics d{};
            const Mat g = g_block(octaves[bi], octaves[bj], &d);
            worst.z_max = std::max(worst.z_max, d.z_max);
            worst.tail_ratio = std::max(worst.tail_ratio, d.tail_ratio);
            for (int r = 0; r < q; ++r)
                for (int c = 0; c < q; ++c) f(bi * q + r, bj * q + c) = g(r, c);
        }
    if (diag) *diag = worst;
    return f;
}

Mat AsymVarEngine::sigma_B(const std::vector<int>& octaves) const {
    const int n = params_.dim();
    const int q = n * (n + 1) / 2;
    const int m = static_cast<int>(octaves.size());
    const Mat pmap = congruence_map(params_.hurst.p_inv);
    Mat block(q * m, q * m);
    for (int b = 0; b < m; ++b)
        for (int r = 0; r < q; ++r)
            for (int c = 0; c < q; ++c) block(b * q + r, b * q + c) = pmap(r, c);
    return block * f_matrix(octaves) * block.transpose();
}

Mat AsymVarEngine::b_at(int j) const { return b_matrix_from(params_, spectrum_.at_octave(j)); }

Mat AsymVarEngine::sigma_h(const std::vector<int>& octaves) const {
    const int m = static_cast<int>(octaves.size());
    if (params_.dim() == 1) {
        // Scalar reduction: Var limit of 2 log(s) sqrt(K) (h-hat - h^E) is
        // G_jj / b11^2, the classical wavelet log-variance constant.
        const Mat sb = sigma_B(octaves);
        Mat out(m, m);
        for (int a = 0; a < m; ++a) {
            const double ba = b_at(octaves[a])(0, 0);
            for (int b = 0; b < m; ++b) {
                const double bb = b_at(octaves[b])(0, 0);
                out(a, b) = sb(a, b) / (ba * bb);
            }
        }
        return out;
    }
    if (params_.dim() != 2) throw ShapeError("sigma_h is defined for n <= 2");
    const Mat sb = sigma_B(octaves);

    Mat qmat(2 * m, 3 * m);
    for (int b = 0; b < m; ++b) {
        const Mat bj = b_at(octaves[b]);
        const double det = determinant(bj);
        const double b11 = bj(0, 0), b12 = bj(0, 1), b22 = bj(1, 1);
        if (!(det > 0.0) || !(b22 > 0.0))
            throw SingularB("B(2^" + std::to_string(octaves[b]) +
                            ") is not positive definite; quadrature or parameters invalid");
        qmat(2 * b + 0, 3 * b + 0) = b22 / det;
        qmat(2 * b + 0, 3 * b + 1) = -2.0 * b12 / det;
        qmat(2 * b + 0, 3 * b + 2) = (b11 * b22 / det - 1.0) / b22;
        qmat(2 * b + 1, 3 * b + 2) = 1.0 / b22;
    }
    return qmat * sb * qmat.transpose();
}

double AsymVarEngine::sigma_theta(int j) const {
    if (params_.dim() != 2) throw ShapeError("sigma_theta is defined for the bivariate case");
    const Mat& p = params_.hurst.p;
    const double p12 = p(0, 1), p22 = p(1, 1);
    if (std::fabs(p22) < 1e-12) throw PreconditionViolated("sigma_theta requires p22 != 0");
    if (std::fabs(p12) < 1e-12) throw PreconditionViolated("sigma_theta requires p12 != 0");
    const Mat bj = b_at(j);
    const double b12 = bj(0, 1), b22 = bj(1, 1);
    if (std::fabs(b12) < 1e-12 * frob_norm(bj))
        throw PreconditionViolated("sigma_theta requires b12(2^j) != 0");
    if (!(b22 > 0.0)) throw SingularB("b22(2^j) must be positive");

    const Mat sb = sigma_B({j});
    const double factor = determinant(p) / (b22 * p22 * p22);
    const double r[3] = {0.0, -factor, factor * b12 / b22};
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) acc += r[a] * sb(a, b) * r[b];
    return acc;
}

AsymCov asym_cov(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves) {
    AsymVarEngine engine(params, psi);
    AsymCov out;
    out.n = params.dim();
    out.octaves = octaves;
    AsymVarEngine::BlockDiagnostics diag{};
    out.f = engine.f_matrix(octaves, &diag);
    out.z_max = diag.z_max;
    out.tail_ratio = diag.tail_ratio;
    out.sigma_b = engine.sigma_B(octaves);
    if (params.dim() == 2) {
        out.sigma_h = engine.sigma_h(octaves);
        for (int j : octaves) {
            try {
                out.sigma_theta.push_back(engine.sigma_theta(j));
            } catch (const Error& e) {
                out.sigma_theta.push_back(std::numeric_limits<double>::quiet_NaN());
                out.notes.push_back("octave " + std::to_string(j) + ": " + e.what());
            }
        }
    }
    return out;
}

Mat omega(const OfbmParams& params, const PsiTable& psi, int j, int jp, int z) {
    return AsymVarEngine(params, psi).omega(j, jp, z);
}

Mat g_block(const OfbmParams& params, const PsiTable& psi, int j, int jp) {
    return AsymVarEngine(params, psi).g_block(j, jp);
}

Mat sigma_B(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves) {
    return AsymVarEngine(params, psi).sigma_B(octaves);
}

Mat sigma_h(const OfbmParams& params, const PsiTable& psi, const std::vector<int>& octaves) {
    return AsymVarEngine(params, psi).sigma_h(octaves);
}

double sigma_theta(const OfbmParams& params, const PsiTable& psi, int j) {
    return AsymVarEngine(params, psi).sigma_theta(j);
}

} // namespace ofbm
