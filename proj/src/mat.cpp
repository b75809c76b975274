#include "ofbm/mat.hpp"

#include <cmath>

namespace ofbm {

namespace {

// Returns the permutation sign, or 0 if the matrix is singular.  `m` is
// reduced to upper-triangular form in place.
int lu_decompose(Mat& m) {
    const int n = m.rows();
    int sign = 1;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(m(i, k)) > std::fabs(m(piv, k))) piv = i;
        if (m(piv, k) == 0.0) return 0;
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            const double f = m(i, k) / m(k, k);
            m(i, k) = 0.0;
            for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return sign;
}

} // namespace

Mat inverse(const Mat& m) {
    if (m.rows() != m.cols()) throw ShapeError("inverse of non-square matrix");
    const int n = m.rows();
    Mat a = m;
    Mat inv = Mat::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(a(i, k)) > std::fabs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) throw UnsupportedSpectrum("singular matrix in inverse()");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(inv(k, j), inv(piv, j));
            }
        const double d = a(k, k);
        for (int j = 0; j < n; ++j) {
            a(k, j) /= d;
            inv(k, j) /= d;
        }
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            const double f = a(i, k);
            if (f == 0.0) continue;
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(k, j);
                inv(i, j) -= f * inv(k, j);
            }
        }
    }
    return inv;
}

double determinant(const Mat& m) {
    if (m.rows() != m.cols()) throw ShapeError("determinant of non-square matrix");
    Mat a = m;
    const int sign = lu_decompose(a);
    if (sign == 0) return 0.0;
    double d = sign;
    for (int i = 0; i < a.rows(); ++i) d *= a(i, i);
    return d;
}

} // namespace ofbm
