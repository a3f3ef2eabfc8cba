#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "regdbn/errors.hpp"

namespace regdbn {

using VectorD = std::vector<double>;

// Dense row-major matrix. Just enough linear algebra for the networks:
// matrix-vector products, outer-product accumulation, elementwise ops.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    static Matrix from_rows(const std::vector<VectorD>& rws) {
        if (rws.empty()) return {};
        Matrix m(rws.size(), rws.front().size());
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != m.cols)
                throw DimensionError("from_rows: ragged row " + std::to_string(i));
            for (std::size_t j = 0; j < m.cols; ++j) m.at(i, j) = rws[i][j];
        }
        return m;
    }

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    const double* row_ptr(std::size_t r) const { return data.data() + r * cols; }
    double* row_ptr(std::size_t r) { return data.data() + r * cols; }

    VectorD row(std::size_t r) const {
        return VectorD(row_ptr(r), row_ptr(r) + cols);
    }

    std::vector<VectorD> to_rows() const {
        std::vector<VectorD> out(rows);
        for (std::size_t i = 0; i < rows; ++i) out[i] = row(i);
        return out;
    }

    bool empty() const { return rows == 0 || cols == 0; }

    bool all_finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
};

inline bool all_finite(const VectorD& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

// y = M^T x with M (n_in x n_out), x length n_in; i.e. column dot products.
inline VectorD matvec_t(const Matrix& m, const VectorD& x) {
    if (x.size() != m.rows) throw DimensionError("matvec_t: length mismatch");
    VectorD y(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double xi = x[i];
        const double* mrow = m.row_ptr(i);
        for (std::size_t j = 0; j < m.cols; ++j) y[j] += xi * mrow[j];
    }
    return y;
}

// y = M x with M (n_rows x n_cols), x length n_cols.
inline VectorD matvec(const Matrix& m, const VectorD& x) {
    if (x.size() != m.cols) throw DimensionError("matvec: length mismatch");
    VectorD y(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* mrow = m.row_ptr(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) acc += mrow[j] * x[j];
        y[i] = acc;
    }
    return y;
}

// M += scale * a b^T
inline void add_outer(Matrix& m, const VectorD& a, const VectorD& b, double scale) {
    if (a.size() != m.rows || b.size() != m.cols)
        throw DimensionError("add_outer: shape mismatch");
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* mrow = m.row_ptr(i);
        const double sa = scale * a[i];
        for (std::size_t j = 0; j < m.cols; ++j) mrow[j] += sa * b[j];
    }
}

inline void axpy(VectorD& y, const VectorD& x, double scale) {
    if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += scale * x[i];
}

inline double dot(const VectorD& a, const VectorD& b) {
    if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const VectorD& v) { return std::sqrt(dot(v, v)); }

// In-place Cholesky solve of the SPD system A x = b; returns false if a
// non-positive pivot shows up (A not positive definite to working precision).
inline bool cholesky_solve(Matrix a, VectorD b, VectorD& x) {
    const std::size_t n = a.rows;
    if (a.cols != n || b.size() != n) throw DimensionError("cholesky_solve: shape");
    for (std::size_t j = 0; j < n; ++j) {
        double d = a.at(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= a.at(j, k) * a.at(j, k);
        if (!(d > 0.0) || !std::isfinite(d)) return false;
        const double l = std::sqrt(d);
        a.at(j, j) = l;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= a.at(i, k) * a.at(j, k);
            a.at(i, j) = s / l;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a.at(i, k) * b[k];
        b[i] = s / a.at(i, i);
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= a.at(k, ii) * x[k];
        x[ii] = s / a.at(ii, ii);
    }
    return true;
}

// Trace of A^-1 for SPD A, via n Cholesky solves against unit vectors.
// Returns false when the factorization fails.
inline bool spd_inverse_trace(const Matrix& a, double& trace) {
    const std::size_t n = a.rows;
    trace = 0.0;
    VectorD e(n, 0.0), col;
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        if (!cholesky_solve(a, e, col)) return false;
        trace += col[j];
        e[j] = 0.0;
    }
    return true;
}

} // namespace regdbn
