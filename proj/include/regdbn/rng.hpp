#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace regdbn {

// Deterministic random stream used everywhere randomness is needed.
//
// Generator: splitmix64 (Steele, Lea & Flood 2014). State advances by the
// 64-bit golden-gamma constant and each output is an avalanche mix of the
// state. The raw 64-bit sequence for a given seed is bit-identical on every
// platform; this algorithm, not merely the seed, is part of the
// reproducibility contract.
//
// Gaussian draws use the Box-Muller transform (cosine branch only), so one
// normal consumes exactly two 64-bit outputs.
//
// Not shareable between concurrent workers; derive one child per worker.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in the open interval (0, 1): 53-bit mantissa, half-ulp offset.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_uniform(); }

    // Bounded integer in [0, n). Modulo reduction; the bias is < 2^-40 for
    // the dataset sizes this toolkit handles.
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    // Standard normal draw, N(0, 1).
    double gaussian() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * pi() * u2);
    }

    // Independent reproducible stream keyed by (seed, label). The child seed
    // is mix64(seed ^ (fnv1a64(label) * golden-gamma)); children with
    // distinct labels never share state with the parent or each other.
    RngStream child(std::string_view label) const {
        std::uint64_t h = fnv1a64(label);
        return RngStream(mix64(seed_ ^ (h * 0x9E3779B97F4A7C15ULL)));
    }

private:
    static constexpr double pi() { return 3.141592653589793238462643383279502884; }

    static std::uint64_t fnv1a64(std::string_view s) {
        std::uint64_t h = 0xCBF29CE484222325ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        return h;
    }

    static std::uint64_t mix64(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

inline double gaussian_sample(RngStream& stream) { return stream.gaussian(); }

} // namespace regdbn
