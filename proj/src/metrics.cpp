#include "regdbn/metrics.hpp"

#include <cmath>

namespace regdbn {

namespace {
void check_pair(const VectorD& p, const VectorD& o, const char* who) {
    if (p.size() != o.size())
        throw DimensionError(std::string(who) + ": length mismatch");
    if (p.empty()) throw InvalidInputError(std::string(who) + ": empty vectors");
}
} // namespace

double mae(const VectorD& predictions, const VectorD& observations) {
    check_pair(predictions, observations, "mae");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        acc += std::abs(predictions[i] - observations[i]);
    return acc / static_cast<double>(predictions.size());
}

double rmse(const VectorD& predictions, const VectorD& observations) {
    check_pair(predictions, observations, "rmse");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - observations[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(predictions.size()));
}

double improvement_pct(double base_error, double model_error) {
    if (!(base_error > 0.0))
        throw InvalidInputError("improvement_pct: base error must be > 0");
    return 100.0 * (base_error - model_error) / base_error;
}

} // namespace regdbn
