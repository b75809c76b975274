#include "ofbm/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ofbm {

SpectralDecomp SpectralDecomp::make(const Mat& p, std::vector<double> eig) {
    if (p.rows() != p.cols()) throw ShapeError("eigenvector matrix must be square");
    if (static_cast<int>(eig.size()) != p.rows())
        throw ShapeError("eigenvalue count does not match dimension");
    for (double e : eig)
        if (!std::isfinite(e)) throw UnsupportedSpectrum("non-finite eigenvalue");
    const double det = determinant(p);
    if (!(std::fabs(det) > 1e-12))
        throw UnsupportedSpectrum("eigenvector matrix is numerically singular (defective or complex spectrum)");
    return SpectralDecomp{p, inverse(p), std::move(eig)};
}

Mat SpectralDecomp::matrix() const {
    const int n = p.rows();
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = eig[i];
    return p * d * p_inv;
}

Mat mat_power(double c, const SpectralDecomp& h) {
    if (!(c > 0.0)) throw UnsupportedSpectrum("mat_power requires c > 0");
    const int n = h.p.rows();
    Mat d(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = std::pow(c, h.eig[i]);
    return h.p * d * h.p_inv;
}

Mat mat_power_series(double c, const Mat& h, int terms) {
    const int n = h.rows();
    const double lc = std::log(c);
    Mat sum = Mat::identity(n);
    Mat term = Mat::identity(n);
    for (int k = 1; k <= terms; ++k) {
        term = term * h * (lc / k);
        sum += term;
    }
    return sum;
}

EigenPair2 sym_eig2(const Mat& s) {
    if (s.rows() != 2 || s.cols() != 2) throw ShapeError("sym_eig2 expects a 2x2 matrix");
    const double a = s(0, 0), b = s(0, 1), c = s(1, 1);
    const double tr = a + c;
    const double det = a * c - b * b;
    const double delta = tr * tr - 4.0 * det;
    const double root = std::sqrt(std::max(delta, 0.0));

    EigenPair2 out;
    out.lambda2 = 0.5 * (tr + root);
    if (det > 0.0 && tr > 0.0) {
        // Rationalized form of ((a+c) - sqrt(delta))/2; avoids cancellation
        // when lambda1 is orders of magnitude below the trace.
        out.lambda1 = 2.0 * det / (tr + root);
    } else {
        out.lambda1 = 0.5 * (tr - root);
    }

    const double scale = std::max({std::fabs(a), std::fabs(b), std::fabs(c)});
    auto normalize = [](std::array<double, 2> v) {
        const double norm = std::hypot(v[0], v[1]);
        v[0] /= norm;
        v[1] /= norm;
        const double lead = (v[0] != 0.0) ? v[0] : v[1];
        if (lead < 0.0) {
            v[0] = -v[0];
            v[1] = -v[1];
        }
        return v;
    };

    if (root <= 1e-12 * std::max(scale, std::fabs(tr))) {
        // Near-degenerate spectrum: any orthonormal pair is valid.
        out.v1 = {1.0, 0.0};
        out.v2 = {0.0, 1.0};
        return out;
    }
    if (b != 0.0) {
        // From S v = lambda v: v2 = (lambda - a)/b * v1.  Pick whichever of the
        // two equivalent forms has the better-conditioned denominator.
        if (std::fabs(out.lambda1 - a) <= std::fabs(out.lambda1 - c))
            out.v1 = normalize({b, out.lambda1 - a});
        else
            out.v1 = normalize({out.lambda1 - c, b});
        out.v2 = normalize({-out.v1[1], out.v1[0]});
    } else {
        if (a <= c) {
            out.v1 = {1.0, 0.0};
            out.v2 = {0.0, 1.0};
        } else {
            out.v1 = {0.0, 1.0};
            out.v2 = {1.0, 0.0};
        }
    }
    return out;
}

SymEigen sym_eig_n(const Mat& s) {
    if (s.rows() != s.cols()) throw ShapeError("sym_eig_n expects a square matrix");
    const int n = s.rows();
    const double norm = frob_norm(s);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::fabs(s(i, j) - s(j, i)) > 1e-12 * std::max(1.0, norm))
                throw ShapeError("sym_eig_n input is not symmetric");

    Mat a = s;
    Mat v = Mat::identity(n);
    const double tol = 1e-12 * std::max(norm, 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
        if (std::sqrt(off) <= tol) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = cs * akp - sn * akq;
                    a(k, q) = sn * akp + cs * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = cs * apk - sn * aqk;
                    a(q, k) = sn * apk + cs * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = cs * vkp - sn * vkq;
                    v(k, q) = sn * vkp + cs * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

    SymEigen out;
    out.values.resize(n);
    out.vectors = Mat(n, n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        int lead = 0;
        while (lead < n - 1 && v(lead, order[j]) == 0.0) ++lead;
        const double sign = v(lead, order[j]) < 0.0 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) out.vectors(i, j) = sign * v(i, order[j]);
    }
    return out;
}

std::vector<double> vec_sym(const Mat& s) {
    const int n = s.rows();
    std::vector<double> v;
    v.reserve(static_cast<size_t>(n) * (n + 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) v.push_back(s(i, j));
    return v;
}

Mat unvec_sym(const std::vector<double>& v, int n) {
    if (static_cast<int>(v.size()) != n * (n + 1) / 2)
        throw ShapeError("unvec_sym length does not match dimension");
    Mat s(n, n);
    size_t idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            s(i, j) = v[idx];
            s(j, i) = v[idx];
            ++idx;
        }
    return s;
}

Mat kron(const Mat& a, const Mat& b) {
    Mat r(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (int k = 0; k < b.rows(); ++k)
                for (int l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

Mat congruence_map(const Mat& pi) {
    const int n = pi.rows();
    const int m = n * (n + 1) / 2;
    // Slot order matches vec_sym: pair (i1,i2) with i1 <= i2.
    std::vector<std::pair<int, int>> slots;
    slots.reserve(m);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) slots.emplace_back(i, j);

    Mat map(m, m);
    for (int r = 0; r < m; ++r) {
        const auto [i1, i2] = slots[r];
        for (int c = 0; c < m; ++c) {
            const auto [k1, k2] = slots[c];
            double coeff = pi(i1, k1) * pi(i2, k2);
            if (k1 != k2) coeff += pi(i1, k2) * pi(i2, k1);
            map(r, c) = coeff;
        }
    }
    return map;
}

} // namespace ofbm
