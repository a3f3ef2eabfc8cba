#pragma once

#include "regdbn/data.hpp"

namespace regdbn {

struct FeatureDist {
    enum class Kind { Uniform, Integer } kind = Kind::Uniform;
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
};

// Generator standing in for the confidential corridor datasets: features
// drawn per column, counts drawn from NB2 with mean exp(b0 + sum b_j x_j),
// year labels assigned round-robin over [year_start, year_end].
struct SynthSpec {
    std::size_t n_rows = 0;
    std::vector<FeatureDist> features;
    VectorD coefficients; // intercept first, then one per feature
    double dispersion = 1.0;
    int year_start = 2000;
    int year_end = 2008;
    std::uint64_t seed = 0;

    void validate() const;
};

Dataset synthesize(const SynthSpec& spec);

// Desk-scale presets: case1 is 3762 rows x 6 features over 2000-2008,
// case2 is 122058 rows x 16 features over 2000-2005.
SynthSpec synth_preset_case1(std::uint64_t seed);
SynthSpec synth_preset_case2(std::uint64_t seed);

// Deterministic samplers backing the generator. Gamma uses the
// Marsaglia-Tsang squeeze, Poisson counts unit-exponential arrivals
// (O(lambda) draws, exact for any lambda that fits the overflow guard).
double sample_gamma(double shape, double scale, RngStream& stream);
double sample_poisson(double lambda, RngStream& stream);
double sample_nb2(double mean, double dispersion, RngStream& stream);

} // namespace regdbn
