#pragma once

#include <string>

#include "regdbn/matrix.hpp"

namespace regdbn {

// Per-column min-max state mapping each column affinely onto [0, 1].
// Columns with min == max map every value to 0 so that degenerate features
// stay finite. Immutable after fit; freely shareable.
struct Scaler {
    VectorD col_min;
    VectorD col_max;

    std::size_t n_cols() const { return col_min.size(); }
};

Scaler fit_scaler(const Matrix& m);
Matrix apply_scaler(const Scaler& s, const Matrix& m);
Matrix invert_scaler(const Scaler& s, const Matrix& m);

// Single-column convenience used for target vectors.
Scaler fit_scaler(const VectorD& v);
VectorD apply_scaler(const Scaler& s, const VectorD& v);
VectorD invert_scaler(const Scaler& s, const VectorD& v);

} // namespace regdbn
