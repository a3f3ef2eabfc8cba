#pragma once

#include "regdbn/matrix.hpp"

namespace regdbn {

// (1/n) sum |P_i - O_i|
double mae(const VectorD& predictions, const VectorD& observations);

// sqrt((1/n) sum (P_i - O_i)^2); never below mae on the same pair
double rmse(const VectorD& predictions, const VectorD& observations);

// 100 * (base - model) / base
double improvement_pct(double base_error, double model_error);

} // namespace regdbn
