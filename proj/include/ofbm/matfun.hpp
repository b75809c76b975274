#ifndef OFBM_MATFUN_HPP
#define OFBM_MATFUN_HPP

#include <array>
#include <vector>

#include "ofbm/mat.hpp"

namespace ofbm {

// Real diagonalizable matrix H = P diag(eig) P^{-1}.  Matrix powers c^H are
// evaluated through this decomposition; complex or defective spectra are not
// representable here and must be rejected upstream.
struct SpectralDecomp {
    Mat p;
    Mat p_inv;
    std::vector<double> eig;

    static SpectralDecomp make(const Mat& p, std::vector<double> eig);
    Mat matrix() const; // P diag(eig) P^{-1}
};

// c^H = P diag(c^{eig}) P^{-1}, c > 0.  c = 1 gives the identity.
Mat mat_power(double c, const SpectralDecomp& h);

// Truncated series sum_{k<=terms} log^k(c) H^k / k!; the independent route
// used to cross-check mat_power.
Mat mat_power_series(double c, const Mat& h, int terms);

struct EigenPair2 {
    double lambda1 = 0.0, lambda2 = 0.0; // lambda1 <= lambda2
    std::array<double, 2> v1{}, v2{};    // unit eigenvectors, first nonzero component positive
};

// Closed-form eigenvalues/eigenvectors of a symmetric 2x2 matrix.  When the
// matrix is positive definite the smallest eigenvalue uses the ratio form
// 2*det/((a+c)(1+sqrt(1-x))), which stays accurate when lambda1 << lambda2.
EigenPair2 sym_eig2(const Mat& s);

struct SymEigen {
    std::vector<double> values; // ascending
    Mat vectors;                // orthonormal columns, aligned with values
};

// Cyclic Jacobi eigensolver for symmetric n x n matrices (n >= 1).
// Sweeps until the off-diagonal Frobenius norm drops below 1e-12 * ||S||.
SymEigen sym_eig_n(const Mat& s);

// Row-major upper-triangle vectorization (s11, s12, ..., s1n; s22, ...; snn).
std::vector<double> vec_sym(const Mat& s);
Mat unvec_sym(const std::vector<double>& v, int n);

Mat kron(const Mat& a, const Mat& b);

// Matrix of the congruence action on vec_sym coordinates:
// vec_sym(Pi S Pi^T) = congruence_map(Pi) * vec_sym(S) for all symmetric S.
Mat congruence_map(const Mat& pi);

} // namespace ofbm

#endif
