#include "ofbm/model.hpp"

#include <cmath>
#include <string>

namespace ofbm {

HurstSpec HurstSpec::make(Mat p, std::vector<double> h) {
    const int n = p.rows();
    if (p.cols() != n || static_cast<int>(h.size()) != n)
        throw ShapeError("HurstSpec dimension mismatch");
    for (int j = 0; j < n; ++j) {
        double norm = 0.0;
        for (int i = 0; i < n; ++i) norm += p(i, j) * p(i, j);
        norm = std::sqrt(norm);
        if (!(norm > 0.0)) throw UnsupportedSpectrum("zero column in mixing matrix");
        for (int i = 0; i < n; ++i) p(i, j) /= norm;
    }
    for (int i = 0; i < n; ++i) {
        if (!(h[i] > 0.0 && h[i] < 1.0))
            throw UnsupportedSpectrum("Hurst eigenvalues must lie in (0,1)");
        if (i > 0 && h[i] < h[i - 1])
            throw UnsupportedSpectrum("Hurst eigenvalues must be ascending");
    }
    if (n == 2 && !(h[0] < h[1]))
        throw UnsupportedSpectrum("bivariate case requires h1 < h2");
    if (std::fabs(determinant(p)) <= 1e-12)
        throw UnsupportedSpectrum("mixing matrix is numerically singular");

    HurstSpec spec;
    spec.n = n;
    spec.p = p;
    spec.p_inv = inverse(p);
    spec.h = std::move(h);
    return spec;
}

Mat HurstSpec::matrix() const {
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = h[i];
    return p * d * p_inv;
}

Mat HurstSpec::power(double c) const {
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::pow(c, h[i]);
    return p * d * p_inv;
}

Mat HurstSpec::power_transpose(double c) const { return power(c).transpose(); }

OfbmParams OfbmParams::make(HurstSpec hurst, Mat sigma) {
    const int n = hurst.n;
    if (sigma.rows() != n || sigma.cols() != n)
        throw ShapeError("Sigma dimension does not match Hurst spec");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(sigma(i, j) - sigma(j, i)) > 1e-12 * std::max(1.0, max_abs(sigma)))
                throw ShapeError("Sigma must be symmetric");
    const auto eig = sym_eig_n(sigma);
    if (!(eig.values.front() > 0.0))
        throw UnsupportedSpectrum("Sigma must be positive definite (properness)");

    OfbmParams params;
    params.hurst = std::move(hurst);
    params.sigma = std::move(sigma);
    return params;
}

Mat sigma_for_amplitude(const HurstSpec& hurst, const Mat& amplitude) {
    const int n = hurst.n;
    if (amplitude.rows() != n || amplitude.cols() != n)
        throw ShapeError("amplitude dimension does not match Hurst spec");
    constexpr double pi = 3.141592653589793238462643;
    Mat core(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            const double s = hurst.h[p] + hurst.h[q];
            const double kappa = 2.0 * pi / (std::tgamma(1.0 + s) * std::sin(0.5 * pi * s));
            core(p, q) = kappa * amplitude(p, q);
        }
    Mat sigma = hurst.p * core * hurst.p.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double v = 0.5 * (sigma(i, j) + sigma(j, i));
            sigma(i, j) = v;
            sigma(j, i) = v;
        }
    return sigma;
}

Mat scaled_sigma(const OfbmParams& params, double x) {
    const int n = params.dim();
    const double ax = std::fabs(x);
    if (ax == 0.0) return Mat(n, n);
    const Mat pw = params.hurst.power(ax);
    return pw * params.sigma * pw.transpose();
}

Mat ofbm_cov(const OfbmParams& params, double s, double t) {
    Mat acc = scaled_sigma(params, t);
    acc += scaled_sigma(params, s);
    acc += scaled_sigma(params, t - s) * (-1.0);
    return acc * 0.5;
}

Mat increment_cov(const OfbmParams& params, std::int64_t k) {
    const double kd = static_cast<double>(k);
    Mat acc = scaled_sigma(params, kd + 1.0);
    acc += scaled_sigma(params, kd - 1.0);
    acc += scaled_sigma(params, kd) * (-2.0);
    return acc * 0.5;
}

PowerLawKernel::PowerLawKernel(const OfbmParams& params)
    : n_(params.dim()),
      p_(params.hurst.p),
      pt_(params.hurst.p.transpose()),
      m_(params.hurst.p_inv * params.sigma * params.hurst.p_inv.transpose()),
      h_(params.hurst.h) {}

Mat PowerLawKernel::eval(double x) const {
    const double ax = std::fabs(x);
    Mat core(n_, n_);
    if (ax > 0.0) {
        std::vector<double> s(n_);
        for (int i = 0; i < n_; ++i) s[i] = std::pow(ax, h_[i]);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) core(i, j) = m_(i, j) * s[i] * s[j];
    }
    return p_ * core * pt_;
}

Mat PowerLawKernel::integrate_linear(const std::vector<double>& w, double u_start,
                                     double step) const {
    Mat acc(n_, n_);
    if (w.size() < 2) return acc;

    // Antiderivative bookkeeping per node, in the eigenbasis: at node u >= 0,
    // a0_pq = u^{1+h_p+h_q}/(1+h_p+h_q), a1_pq = u^{2+h_p+h_q}/(2+h_p+h_q).
    const int n = n_;
    auto node_powers = [&](double u, std::vector<double>& a0, std::vector<double>& a1) {
        std::vector<double> s(n);
        for (int i = 0; i < n; ++i) s[i] = std::pow(u, h_[i]);
        int idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx) {
                const double e = h_[i] + h_[j];
                const double common = u * s[i] * s[j];
                a0[idx] = common / (1.0 + e);
                a1[idx] = common * u / (2.0 + e);
            }
    };

    // Process one cell [a,b] in [0, inf) with endpoint weights (wa, wb).
    std::vector<double> a0a(n * n), a1a(n * n), a0b(n * n), a1b(n * n);
    auto add_cell = [&](double a, double b, double wa, double wb) {
        if (b <= a) return;
        node_powers(a, a0a, a1a);
        node_powers(b, a0b, a1b);
        const double slope = (wb - wa) / (b - a);
        int idx = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j, ++idx) {
                const double d0 = a0b[idx] - a0a[idx];
                const double d1 = a1b[idx] - a1a[idx];
                acc(i, j) += m_(i, j) * (wa * d0 + slope * (d1 - a * d0));
            }
    };

    for (size_t i = 0; i + 1 < w.size(); ++i) {
        const double u0 = u_start + static_cast<double>(i) * step;
        const double u1 = u0 + step;
        if (u1 <= 0.0) {
            add_cell(-u1, -u0, w[i + 1], w[i]);
        } else if (u0 >= 0.0) {
            add_cell(u0, u1, w[i], w[i + 1]);
        } else {
            // Straddling cell (nodes normally align with zero; kept for safety).
            const double w0 = w[i] + (w[i + 1] - w[i]) * (0.0 - u0) / step;
            add_cell(0.0, -u0, w0, w[i]);
            add_cell(0.0, u1, w0, w[i + 1]);
        }
    }
    return p_ * acc * pt_;
}

namespace {

// Autocorrelation of the piecewise-constant psi at its grid nodes:
// rho(m * step) = step * sum_a psi[a] psi[a-m], exact for cell samples.
std::vector<double> psi_autocorrelation(const std::vector<double>& psi, double step) {
    const std::int64_t c = static_cast<std::int64_t>(psi.size());
    std::vector<double> rho(2 * c - 1, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t m = 0; m < c; ++m) {
        double acc = 0.0;
        for (std::int64_t a = m; a < c; ++a) acc += psi[a] * psi[a - m];
        rho[c - 1 + m] = acc * step;
        rho[c - 1 - m] = acc * step;
    }
    return rho;
}

} // namespace

Mat base_spectrum_raw(const OfbmParams& params, const PsiTable& psi) {
    const PowerLawKernel kernel(params);
    const auto rho = psi_autocorrelation(psi.psi, psi.psi_step);
    const double u_start = -(static_cast<double>(psi.psi.size()) - 1.0) * psi.psi_step;
    const Mat integral = kernel.integrate_linear(rho, u_start, psi.psi_step);
    Mat ew = integral * (-0.5);
    // Symmetrize: the integrand is symmetric, keep it exact against roundoff.
    for (int i = 0; i < ew.rows(); ++i)
        for (int j = i + 1; j < ew.cols(); ++j) {
            const double v = 0.5 * (ew(i, j) + ew(j, i));
            ew(i, j) = v;
            ew(j, i) = v;
        }
    return ew;
}

SpectrumTable::SpectrumTable(const OfbmParams& params, const PsiTable& psi, double rel_tol)
    : params_(params) {
    base_ = base_spectrum_raw(params, psi);
    // Convergence gate: one extra cascade level must not move the result.
    // The table-resolution value is kept so that every consumer of this psi
    // table sees one consistent spectrum.
    const PsiTable finer = cascade_psi(psi.filters, psi.resolution + 1);
    const Mat refined = base_spectrum_raw(params, finer);
    const double diff = frob_norm(refined - base_);
    const double scale = frob_norm(refined);
    if (!(diff <= rel_tol * scale))
        throw QuadratureError("wavelet spectrum quadrature did not converge: refinement moved " +
                              std::to_string(diff / scale) + " relative (tol " +
                              std::to_string(rel_tol) + ")");
}

Mat SpectrumTable::at_scale(double s) const {
    const Mat pw = params_.hurst.power(s);
    Mat ew = pw * base_ * pw.transpose();
    for (int i = 0; i < ew.rows(); ++i)
        for (int j = i + 1; j < ew.cols(); ++j) {
            const double v = 0.5 * (ew(i, j) + ew(j, i));
            ew(i, j) = v;
            ew(j, i) = v;
        }
    return ew;
}

Mat wavelet_spectrum(const OfbmParams& params, const PsiTable& psi, int j) {
    return SpectrumTable(params, psi).at_octave(j);
}

Mat b_matrix_from(const OfbmParams& params, const Mat& ew) {
    const Mat& pi = params.hurst.p_inv;
    Mat b = pi * ew * pi.transpose();
    for (int i = 0; i < b.rows(); ++i)
        for (int j = i + 1; j < b.cols(); ++j) {
            const double v = 0.5 * (b(i, j) + b(j, i));
            b(i, j) = v;
            b(j, i) = v;
        }
    return b;
}

Mat b_matrix(const OfbmParams& params, const PsiTable& psi, int j) {
    return b_matrix_from(params, SpectrumTable(params, psi).at_octave(j));
}

TheoreticalEigen theoretical_eigen_h(const SpectrumTable& table, int j, std::int64_t a) {
    const double scale = static_cast<double>(a) * std::ldexp(1.0, j);
    if (!(scale > 1.0))
        throw PreconditionViolated("analysis scale must exceed 1 for log-scale estimates");
    const Mat ew = table.at_scale(scale);
    const int n = ew.rows();

    TheoreticalEigen out;
    out.scale = scale;
    if (n == 2) {
        const auto e = sym_eig2(ew);
        out.lambda = {e.lambda1, e.lambda2};
    } else {
        out.lambda = sym_eig_n(ew).values;
    }
    const double denom = 2.0 * std::log(scale);
    for (double lam : out.lambda) {
        if (!(lam > 0.0))
            throw NonPositiveEigenvalue("EW(scale) is not positive definite", scale);
        out.h.push_back(std::log(lam) / denom);
    }
    if (n == 2) {
        const double b = ew(0, 1);
        if (b != 0.0) {
            out.theta = (out.lambda[0] - ew(0, 0)) / b;
            out.theta_valid = true;
        }
    }
    return out;
}

double theoretical_theta(const SpectrumTable& table, int j, std::int64_t a) {
    const auto te = theoretical_eigen_h(table, j, a);
    if (!te.theta_valid)
        throw DegenerateOffDiagonal("EW(scale) off-diagonal vanishes; theta undefined");
    return te.theta;
}

} // namespace ofbm
