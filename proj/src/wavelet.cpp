#include "ofbm/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>

namespace ofbm {

namespace {

using cld = std::complex<long double>;

long double binomial(int n, int k) {
    long double r = 1.0L;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Roots of the Daubechies half-band remainder P(y) = sum binom(N-1+k,k) y^k
// by Durand-Kerner iteration; degree <= 9 for the supported range.
std::vector<cld> remainder_roots(int n_psi) {
    const int deg = n_psi - 1;
    std::vector<long double> coef(deg + 1);
    for (int k = 0; k <= deg; ++k) coef[k] = binomial(n_psi - 1 + k, k);

    auto eval = [&](cld y) {
        cld acc = coef[deg];
        for (int k = deg - 1; k >= 0; --k) acc = acc * y + coef[k];
        return acc;
    };

    std::vector<cld> roots(deg);
    for (int i = 0; i < deg; ++i)
        roots[i] = std::pow(cld(0.4L, 0.9L), static_cast<long double>(i + 1));

    for (int iter = 0; iter < 500; ++iter) {
        long double worst = 0.0L;
        for (int i = 0; i < deg; ++i) {
            cld denom = coef[deg];
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            const cld delta = eval(roots[i]) / denom;
            roots[i] -= delta;
            worst = std::max(worst, std::abs(delta));
        }
        if (worst < 1e-30L) break;
    }
    return roots;
}

struct RootGroup {
    cld z_in;  // |z| < 1 representative
    bool conj; // complex group contributes z and its conjugate
};

// Multiply poly by (z - r), real root.
void mul_real_root(std::vector<long double>& p, long double r) {
    p.push_back(0.0L);
    for (size_t i = p.size() - 1; i >= 1; --i) p[i] = p[i - 1] - r * p[i];
    p[0] = -r * p[0];
}

// Multiply poly by z^2 - 2 Re(z0) z + |z0|^2.
void mul_conj_pair(std::vector<long double>& p, cld z0) {
    const long double b = -2.0L * z0.real();
    const long double c = std::norm(z0);
    std::vector<long double> q(p.size() + 2, 0.0L);
    for (size_t i = 0; i < p.size(); ++i) {
        q[i] += p[i] * c;
        q[i + 1] += p[i] * b;
        q[i + 2] += p[i];
    }
    p = std::move(q);
}

std::vector<double> build_filter(int n_psi, const std::vector<RootGroup>& groups,
                                 unsigned choice_mask) {
    std::vector<long double> poly = {1.0L};
    for (size_t g = 0; g < groups.size(); ++g) {
        const bool outside = (choice_mask >> g) & 1u;
        cld z = groups[g].z_in;
        if (outside) z = cld(1.0L, 0.0L) / z;
        if (groups[g].conj)
            mul_conj_pair(poly, z);
        else
            mul_real_root(poly, z.real());
    }
    for (int i = 0; i < n_psi; ++i) {
        // multiply by (1 + z)
        poly.push_back(0.0L);
        for (size_t k = poly.size() - 1; k >= 1; --k) poly[k] += poly[k - 1];
    }

    long double sum = 0.0L;
    for (long double c : poly) sum += c;
    const long double scale = std::sqrt(2.0L) / sum;
    std::vector<double> h(poly.size());
    for (size_t i = 0; i < poly.size(); ++i) h[i] = static_cast<double>(poly[i] * scale);
    return h;
}

// Energy-weighted deviation of the group delay from the linear-phase center;
// the least-asymmetric variant picks the root choice minimizing this.
double phase_nonlinearity(const std::vector<double>& h) {
    const int len = static_cast<int>(h.size());
    const double center = 0.5 * (len - 1);
    double measure = 0.0;
    const int grid = 257;
    for (int s = 1; s < grid; ++s) {
        const double w = 3.141592653589793 * (s - 0.5) / grid;
        std::complex<double> hw(0.0, 0.0), tw(0.0, 0.0);
        for (int k = 0; k < len; ++k) {
            const std::complex<double> e(std::cos(k * w), -std::sin(k * w));
            hw += h[k] * e;
            tw += static_cast<double>(k) * h[k] * e;
        }
        const double mag2 = std::norm(hw);
        if (mag2 < 1e-14) continue;
        const double tau = (tw * std::conj(hw)).real() / mag2;
        measure += mag2 * (tau - center) * (tau - center);
    }
    return measure;
}

// Gauss-Newton polish against the defining equations: sum, QMF shift
// orthonormality, and the discrete vanishing moments.
void polish(std::vector<double>& hd, int n_psi) {
    const int len = 2 * n_psi;
    std::vector<long double> h(hd.begin(), hd.end());
    const long double sqrt2 = std::sqrt(2.0L);
    const int n_eq = 1 + n_psi + n_psi;

    for (int iter = 0; iter < 6; ++iter) {
        std::vector<long double> r(n_eq, 0.0L);
        std::vector<std::vector<long double>> jac(n_eq, std::vector<long double>(len, 0.0L));

        int e = 0;
        for (int k = 0; k < len; ++k) {
            r[e] += h[k];
            jac[e][k] = 1.0L;
        }
        r[e] -= sqrt2;
        ++e;

        for (int m = 0; m < n_psi; ++m, ++e) {
            for (int k = 0; k + 2 * m < len; ++k) {
                r[e] += h[k] * h[k + 2 * m];
                jac[e][k] += h[k + 2 * m];
                jac[e][k + 2 * m] += h[k];
            }
            if (m == 0) r[e] -= 1.0L;
        }

        for (int q = 0; q < n_psi; ++q, ++e) {
            const long double scale = std::pow(static_cast<long double>(len - 1), q);
            for (int k = 0; k < len; ++k) {
                const long double term =
                    ((k % 2 == 0) ? 1.0L : -1.0L) * std::pow(static_cast<long double>(k), q) / scale;
                r[e] += term * h[k];
                jac[e][k] = term;
            }
        }

        // Solve normal equations J^T J d = J^T r.
        std::vector<std::vector<long double>> a(len, std::vector<long double>(len + 1, 0.0L));
        for (int i = 0; i < len; ++i) {
            for (int j = 0; j < len; ++j) {
                long double acc = 0.0L;
                for (int q = 0; q < n_eq; ++q) acc += jac[q][i] * jac[q][j];
                a[i][j] = acc;
            }
            long double acc = 0.0L;
            for (int q = 0; q < n_eq; ++q) acc += jac[q][i] * r[q];
            a[i][len] = acc;
        }
        for (int col = 0; col < len; ++col) {
            int piv = col;
            for (int i = col + 1; i < len; ++i)
                if (std::fabs(static_cast<double>(a[i][col])) >
                    std::fabs(static_cast<double>(a[piv][col])))
                    piv = i;
            std::swap(a[col], a[piv]);
            for (int i = 0; i < len; ++i) {
                if (i == col || a[col][col] == 0.0L) continue;
                const long double f = a[i][col] / a[col][col];
                for (int j = col; j <= len; ++j) a[i][j] -= f * a[col][j];
            }
        }
        long double worst = 0.0L;
        for (int i = 0; i < len; ++i) {
            const long double d = a[i][len] / a[i][i];
            h[i] -= d;
            worst = std::max(worst, std::fabs(d));
        }
        if (worst < 1e-19L) break;
    }
    for (int k = 0; k < len; ++k) hd[k] = static_cast<double>(h[k]);
}

} // namespace

FilterPair daubechies_filters(int n_psi, FilterVariant variant) {
    if (n_psi < 2 || n_psi > 10)
        throw UnsupportedFilter("n_psi must lie in [2, 10], got " + std::to_string(n_psi));

    std::vector<RootGroup> groups;
    for (const cld& y : remainder_roots(n_psi)) {
        if (y.imag() < -1e-18L) continue; // conjugate handled by its partner
        const bool conj = y.imag() > 1e-18L;
        const cld w = cld(1.0L, 0.0L) - 2.0L * y;
        const cld s = std::sqrt(w * w - cld(1.0L, 0.0L));
        const cld z1 = w + s, z2 = w - s;
        // z1 * z2 = 1; derive the inner root from the better-conditioned outer one.
        const cld z_out = (std::abs(z1) >= std::abs(z2)) ? z1 : z2;
        groups.push_back({cld(1.0L, 0.0L) / z_out, conj});
    }

    std::vector<double> h;
    if (variant == FilterVariant::extremal_phase || groups.empty()) {
        h = build_filter(n_psi, groups, 0u);
    } else {
        double best = 0.0;
        unsigned best_mask = 0;
        const unsigned n_choices = 1u << groups.size();
        for (unsigned mask = 0; mask < n_choices; ++mask) {
            auto cand = build_filter(n_psi, groups, mask);
            const double m = phase_nonlinearity(cand);
            if (mask == 0 || m < best) {
                best = m;
                best_mask = mask;
            }
        }
        h = build_filter(n_psi, groups, best_mask);
    }

    polish(h, n_psi);

    FilterPair out;
    out.n_psi = n_psi;
    out.variant = variant;
    out.h = h;
    out.g.resize(h.size());
    const int last = static_cast<int>(h.size()) - 1;
    for (int k = 0; k <= last; ++k)
        out.g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h[last - k];
    return out;
}

PsiTable cascade_psi(const FilterPair& filters, int resolution) {
    if (resolution < 6 || resolution > 14)
        throw UnsupportedFilter("cascade resolution must lie in [6, 14]");

    const int support = 2 * filters.n_psi - 1;
    const double sqrt2 = std::sqrt(2.0);

    // phi_0 = indicator of [0,1); R refinement steps, each exact on its grid.
    std::vector<double> phi(support, 0.0);
    phi[0] = 1.0;
    for (int level = 1; level <= resolution; ++level) {
        const std::int64_t prev_cells = static_cast<std::int64_t>(support) << (level - 1);
        const std::int64_t cells = prev_cells * 2;
        std::vector<double> next(cells, 0.0);
        const std::int64_t shift = std::int64_t{1} << (level - 1);
        for (std::int64_t i = 0; i < cells; ++i) {
            double acc = 0.0;
            for (int k = 0; k < filters.taps(); ++k) {
                const std::int64_t idx = i - k * shift;
                if (idx >= 0 && idx < prev_cells) acc += filters.h[k] * phi[idx];
            }
            next[i] = sqrt2 * acc;
        }
        phi = std::move(next);
    }

    // psi on the next-finer grid from the refinement relation.
    const std::int64_t phi_cells = static_cast<std::int64_t>(support) << resolution;
    const std::int64_t psi_cells = phi_cells * 2;
    const std::int64_t shift = std::int64_t{1} << resolution;
    std::vector<double> psi(psi_cells, 0.0);
    for (std::int64_t i = 0; i < psi_cells; ++i) {
        double acc = 0.0;
        for (int k = 0; k < filters.taps(); ++k) {
            const std::int64_t idx = i - k * shift;
            if (idx >= 0 && idx < phi_cells) acc += filters.g[k] * phi[idx];
        }
        psi[i] = sqrt2 * acc;
    }

    PsiTable table;
    table.resolution = resolution;
    table.phi_step = std::ldexp(1.0, -resolution);
    table.psi_step = std::ldexp(1.0, -(resolution + 1));
    table.phi = std::move(phi);
    table.psi = std::move(psi);
    table.filters = filters;
    double a_phi = 0.0;
    for (double v : table.phi) a_phi += v;
    table.a_phi = a_phi * table.phi_step;
    return table;
}

WaveletCoeffs pyramid(const SamplePath& levels, const FilterPair& filters, int j_max,
                      double a_phi) {
    if (levels.kind != SamplePath::Kind::levels)
        throw KindError("pyramid expects a levels path (discrete OFBM sample)");
    const int n = levels.n;
    const int taps = filters.taps();

    WaveletCoeffs out;
    out.n = n;

    // Current approximation a~_{j,.}, one contiguous block per component.
    std::vector<std::vector<double>> approx(n, std::vector<double>(levels.len));
    for (int c = 0; c < n; ++c)
        for (std::int64_t t = 0; t < levels.len; ++t) approx[c][t] = a_phi * levels.at(t, c);

    std::int64_t avail = levels.len;
    for (int j = 1; j <= j_max; ++j) {
        const std::int64_t count = (avail >= taps) ? (avail - taps) / 2 + 1 : 0;
        if (count < 1) {
            if (out.octaves.empty())
                throw InsufficientData("series too short for any octave", 0);
            throw InsufficientData("series supports octaves up to " +
                                       std::to_string(out.octaves.back().octave),
                                   out.octaves.back().octave);
        }

        OctaveCoeffs oc;
        oc.octave = j;
        oc.count = count;
        oc.detail.assign(static_cast<size_t>(count) * n, 0.0);

        std::vector<std::vector<double>> next(n, std::vector<double>(count));
#pragma omp parallel for schedule(static)
        for (int c = 0; c < n; ++c) {
            const double* a = approx[c].data();
            for (std::int64_t k = 0; k < count; ++k) {
                double lo = 0.0, hi = 0.0;
                const double* base = a + 2 * k;
                for (int t = 0; t < taps; ++t) {
                    lo += filters.h[t] * base[t];
                    hi += filters.g[t] * base[t];
                }
                next[c][k] = lo;
                oc.detail[static_cast<size_t>(k) * n + c] = hi;
            }
        }
        approx = std::move(next);
        avail = count;
        out.octaves.push_back(std::move(oc));
    }
    return out;
}

void normalize_coeffs(WaveletCoeffs& coeffs) {
    for (auto& oc : coeffs.octaves) {
        if (oc.normalized) continue;
        const double scale = std::pow(2.0, -0.5 * oc.octave);
        for (double& v : oc.detail) v *= scale;
        oc.normalized = true;
    }
}

WaveletVariance wavelet_variance(const WaveletCoeffs& coeffs, std::int64_t min_count) {
    WaveletVariance out;
    out.n = coeffs.n;
    const int n = coeffs.n;
    for (const auto& oc : coeffs.octaves) {
        if (oc.count < min_count) continue;
        OctaveVariance ov;
        ov.octave = oc.octave;
        ov.count = oc.count;
        ov.w = Mat(n, n);
        for (std::int64_t k = 0; k < oc.count; ++k) {
            const double* row = oc.detail.data() + static_cast<size_t>(k) * n;
            for (int i = 0; i < n; ++i)
                for (int j = i; j < n; ++j) ov.w(i, j) += row[i] * row[j];
        }
        const double inv = 1.0 / static_cast<double>(oc.count);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                ov.w(i, j) *= inv;
                ov.w(j, i) = ov.w(i, j);
            }
        out.octaves.push_back(std::move(ov));
    }
    if (out.octaves.empty())
        throw InsufficientData("no octave has the required coefficient count", 0);
    return out;
}

} // namespace ofbm
