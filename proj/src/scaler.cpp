#include "regdbn/scaler.hpp"

#include <algorithm>
#include <cmath>

namespace regdbn {

Scaler fit_scaler(const Matrix& m) {
    if (m.empty()) throw InvalidInputError("fit_scaler: empty matrix");
    if (!m.all_finite()) throw InvalidInputError("fit_scaler: non-finite entry");
    Scaler s;
    s.col_min.assign(m.cols, 0.0);
    s.col_max.assign(m.cols, 0.0);
    for (std::size_t j = 0; j < m.cols; ++j) {
        double lo = m.at(0, j), hi = m.at(0, j);
        for (std::size_t i = 1; i < m.rows; ++i) {
            lo = std::min(lo, m.at(i, j));
            hi = std::max(hi, m.at(i, j));
        }
        s.col_min[j] = lo;
        s.col_max[j] = hi;
    }
    return s;
}

Matrix apply_scaler(const Scaler& s, const Matrix& m) {
    if (m.cols != s.n_cols()) throw DimensionError("apply_scaler: column mismatch");
    if (!m.all_finite()) throw InvalidInputError("apply_scaler: non-finite entry");
    Matrix out(m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        const double lo = s.col_min[j];
        const double span = s.col_max[j] - lo;
        for (std::size_t i = 0; i < m.rows; ++i)
            out.at(i, j) = span == 0.0 ? 0.0 : (m.at(i, j) - lo) / span;
    }
    return out;
}

Matrix invert_scaler(const Scaler& s, const Matrix& m) {
    if (m.cols != s.n_cols()) throw DimensionError("invert_scaler: column mismatch");
    Matrix out(m.rows, m.cols);
    for (std::size_t j = 0; j < m.cols; ++j) {
        const double lo = s.col_min[j];
        const double span = s.col_max[j] - lo;
        for (std::size_t i = 0; i < m.rows; ++i)
            out.at(i, j) = lo + span * m.at(i, j);
    }
    return out;
}

namespace {
Matrix as_column(const VectorD& v) {
    Matrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.at(i, 0) = v[i];
    return m;
}
} // namespace

Scaler fit_scaler(const VectorD& v) { return fit_scaler(as_column(v)); }

VectorD apply_scaler(const Scaler& s, const VectorD& v) {
    return apply_scaler(s, as_column(v)).data;
}

VectorD invert_scaler(const Scaler& s, const VectorD& v) {
    return invert_scaler(s, as_column(v)).data;
}

} // namespace regdbn
