#pragma once

#include <functional>

#include "regdbn/errors.hpp"
#include "regdbn/matrix.hpp"

namespace regdbn {

// Central-difference gradient, (f(p + h e_k) - f(p - h e_k)) / (2h).
// Independent check for every analytic gradient in this library.
inline VectorD finite_diff_gradient(const std::function<double(const VectorD&)>& f,
                                    const VectorD& p, double h) {
    if (!(h > 0.0)) throw InvalidInputError("finite_diff_gradient: h must be > 0");
    VectorD g(p.size(), 0.0);
    VectorD q = p;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double orig = q[k];
        q[k] = orig + h;
        const double fp = f(q);
        q[k] = orig - h;
        const double fm = f(q);
        q[k] = orig;
        g[k] = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace regdbn
