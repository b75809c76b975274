#ifndef OFBM_MAT_HPP
#define OFBM_MAT_HPP

#include <cmath>
#include <initializer_list>
#include <vector>

#include "ofbm/errors.hpp"

namespace ofbm {

// Dense row-major matrix for the small problems handled here (n <= 8 in
// practice, plus the n(n+1)/2-sized covariance blocks).
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0.0) {}
    Mat(int rows, int cols, std::initializer_list<double> entries)
        : rows_(rows), cols_(cols), a_(entries) {
        if (static_cast<int>(a_.size()) != rows * cols)
            throw ShapeError("initializer size does not match matrix shape");
    }

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

    Mat operator+(const Mat& o) const {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
        return r;
    }
    Mat operator-(const Mat& o) const {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
        return r;
    }
    Mat operator*(double s) const {
        Mat r(rows_, cols_);
        for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * s;
        return r;
    }
    Mat& operator+=(const Mat& o) {
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw ShapeError("matrix product shape mismatch");
        Mat r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const double aik = (*this)(i, k);
                if (aik == 0.0) continue;
                for (int j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
            }
        return r;
    }

    Mat transpose() const {
        Mat r(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    std::vector<double> col(int j) const {
        std::vector<double> v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

private:
    int rows_, cols_;
    std::vector<double> a_;
};

inline Mat operator*(double s, const Mat& m) { return m * s; }

inline double frob_norm(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s += m(i, j) * m(i, j);
    return std::sqrt(s);
}

inline double max_abs(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) s = std::max(s, std::fabs(m(i, j)));
    return s;
}

// Gauss-Jordan with partial pivoting; fine at these dimensions.
Mat inverse(const Mat& m);
double determinant(const Mat& m);

} // namespace ofbm

#endif
