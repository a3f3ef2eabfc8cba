#include "regdbn/synth.hpp"

#include <cmath>
#include <string>

namespace regdbn {

double sample_gamma(double shape, double scale, RngStream& stream) {
    if (!(shape > 0.0) || !(scale > 0.0))
        throw InvalidInputError("sample_gamma: shape and scale must be > 0");
    if (shape < 1.0) {
        // boost to shape+1, then scale back by a uniform power
        const double u = stream.next_uniform();
        return sample_gamma(shape + 1.0, scale, stream) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = stream.gaussian();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = stream.next_uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double sample_poisson(double lambda, RngStream& stream) {
    if (!(lambda >= 0.0)) throw InvalidInputError("sample_poisson: lambda must be >= 0");
    // count unit-exponential arrivals before time lambda
    double t = -std::log(stream.next_uniform());
    double n = 0.0;
    while (t <= lambda) {
        t += -std::log(stream.next_uniform());
        n += 1.0;
    }
    return n;
}

double sample_nb2(double mean, double dispersion, RngStream& stream) {
    if (!(mean >= 0.0) || !(dispersion > 0.0))
        throw InvalidInputError("sample_nb2: need mean >= 0, dispersion > 0");
    if (mean == 0.0) return 0.0;
    const double lambda = sample_gamma(dispersion, mean / dispersion, stream);
    return sample_poisson(lambda, stream);
}

void SynthSpec::validate() const {
    if (n_rows < 1) throw InvalidInputError("SynthSpec: n_rows >= 1");
    if (features.empty()) throw InvalidInputError("SynthSpec: needs features");
    if (coefficients.size() != features.size() + 1)
        throw DimensionError("SynthSpec: coefficients must be intercept + one per feature");
    if (!(dispersion > 0.0)) throw InvalidInputError("SynthSpec: dispersion > 0");
    if (year_start > year_end) throw InvalidInputError("SynthSpec: year range inverted");
    for (const FeatureDist& f : features) {
        if (!std::isfinite(f.lo) || !std::isfinite(f.hi) || f.lo > f.hi)
            throw InvalidInputError("SynthSpec: bad range for feature " + f.name);
    }
    if (!all_finite(coefficients))
        throw InvalidInputError("SynthSpec: non-finite coefficient");
}

Dataset synthesize(const SynthSpec& spec) {
    spec.validate();
    RngStream root(spec.seed);
    RngStream feat_stream = root.child("features");
    RngStream target_stream = root.child("targets");

    Dataset ds;
    ds.features = Matrix(spec.n_rows, spec.features.size());
    ds.targets.resize(spec.n_rows);
    ds.years.resize(spec.n_rows);
    for (const FeatureDist& f : spec.features) ds.feature_names.push_back(f.name);

    for (std::size_t r = 0; r < spec.n_rows; ++r) {
        for (std::size_t j = 0; j < spec.features.size(); ++j) {
            const FeatureDist& f = spec.features[j];
            double v = feat_stream.uniform(f.lo, f.hi);
            if (f.kind == FeatureDist::Kind::Integer) v = std::floor(v);
            ds.features.at(r, j) = v;
        }
    }

    const int n_years = spec.year_end - spec.year_start + 1;
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
        double eta = spec.coefficients[0];
        for (std::size_t j = 0; j < spec.features.size(); ++j)
            eta += spec.coefficients[j + 1] * ds.features.at(r, j);
        if (eta > 30.0)
            throw InvalidInputError("synthesize: mean overflow (exp argument " +
                                    std::to_string(eta) + " > 30) at row " +
                                    std::to_string(r));
        ds.targets[r] = sample_nb2(std::exp(eta), spec.dispersion, target_stream);
        ds.years[r] = spec.year_start + static_cast<int>(r % n_years);
    }
    ds.validate();
    return ds;
}

SynthSpec synth_preset_case1(std::uint64_t seed) {
    SynthSpec spec;
    spec.n_rows = 3762;
    spec.features = {
        {FeatureDist::Kind::Uniform, "exposure", 0.2, 10.0},
        {FeatureDist::Kind::Uniform, "aadt", 1.45, 44.29}, // units of 10^4 vehicles
        {FeatureDist::Kind::Uniform, "left_shield", 0.0, 5.0},
        {FeatureDist::Kind::Uniform, "median_width", 0.0, 30.0},
        {FeatureDist::Kind::Uniform, "right_shield", 0.0, 5.0},
        {FeatureDist::Kind::Uniform, "curve_deflection", 0.0, 45.0},
    };
    spec.coefficients = {0.30, 0.16, 0.030, -0.040, -0.012, 0.050, 0.012};
    spec.dispersion = 1.5;
    spec.year_start = 2000;
    spec.year_end = 2008;
    spec.seed = seed;
    return spec;
}

SynthSpec synth_preset_case2(std::uint64_t seed) {
    SynthSpec spec;
    spec.n_rows = 122058;
    const char* names[16] = {
        "region",       "road_type",     "storm_hour",   "month_id",
        "temperature",  "wind_speed",    "visibility",   "precipitation",
        "rsi",          "wrm",           "anti_icing",   "traffic_volume",
        "length",       "shoulder_full", "shoulder_part", "bridges",
    };
    for (const char* name : names)
        spec.features.push_back({FeatureDist::Kind::Uniform, name, 0.0, 1.0});
    spec.features[0] = {FeatureDist::Kind::Integer, "region", 0.0, 5.0};
    spec.features[1] = {FeatureDist::Kind::Integer, "road_type", 0.0, 4.0};
    spec.coefficients = {-2.2, 0.10, 0.08,  0.30, -0.15, -0.40, 0.25, -0.30, 0.45,
                         -0.50, 0.12, -0.20, 0.60,  0.35, -0.10, 0.05, 0.20};
    spec.dispersion = 0.8;
    spec.year_start = 2000;
    spec.year_end = 2005;
    spec.seed = seed;
    return spec;
}

} // namespace regdbn
