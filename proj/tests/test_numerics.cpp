#include <doctest.h>

#include <cmath>

#include "regdbn/gradcheck.hpp"
#include "regdbn/rng.hpp"
#include "regdbn/scaler.hpp"

using namespace regdbn;

TEST_CASE("rng: same seed gives identical sequences") {
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    RngStream c(42), d(42);
    for (int i = 0; i < 100; ++i) CHECK(c.gaussian() == d.gaussian());
}

TEST_CASE("rng: gaussian moments over a million draws") {
    RngStream stream(12345);
    const int n = 1'000'000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = gaussian_sample(stream);
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    CHECK(std::abs(mean) < 0.005);
    CHECK(std::abs(var - 1.0) < 0.01);
}

TEST_CASE("rng: uniforms stay inside the open unit interval") {
    RngStream stream(7);
    for (int i = 0; i < 100'000; ++i) {
        const double u = stream.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("rng: child streams are reproducible and label-distinct") {
    RngStream parent(99);
    RngStream a1 = parent.child("alpha");
    RngStream b = parent.child("beta");
    CHECK(a1.next_u64() != b.next_u64());

    // children depend on (seed, label), not on parent state
    parent.next_u64();
    RngStream a2 = parent.child("alpha");
    RngStream a3 = RngStream(99).child("alpha");
    const std::uint64_t first = a2.next_u64();
    CHECK(first == a3.next_u64());
}

TEST_CASE("scaler: maps columns onto [0,1]") {
    Matrix m(3, 1);
    m.at(0, 0) = 2.0;
    m.at(1, 0) = 4.0;
    m.at(2, 0) = 6.0;
    const Scaler s = fit_scaler(m);
    const Matrix out = apply_scaler(s, m);
    CHECK(out.at(0, 0) == doctest::Approx(0.0));
    CHECK(out.at(1, 0) == doctest::Approx(0.5));
    CHECK(out.at(2, 0) == doctest::Approx(1.0));
}

TEST_CASE("scaler: constant columns map to zero") {
    Matrix m(2, 1, 5.0);
    const Matrix out = apply_scaler(fit_scaler(m), m);
    CHECK(out.at(0, 0) == 0.0);
    CHECK(out.at(1, 0) == 0.0);
}

TEST_CASE("scaler: invert after apply is the identity") {
    RngStream stream(3);
    Matrix m(40, 5);
    for (double& v : m.data) v = stream.uniform(-100.0, 250.0);
    const Scaler s = fit_scaler(m);
    const Matrix scaled = apply_scaler(s, m);
    for (double v : scaled.data) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    const Matrix back = invert_scaler(s, scaled);
    for (std::size_t k = 0; k < m.data.size(); ++k)
        CHECK(back.data[k] == doctest::Approx(m.data[k]).epsilon(1e-12));
}

TEST_CASE("scaler: rejects non-finite entries") {
    Matrix m(2, 1);
    m.at(1, 0) = std::nan("");
    CHECK_THROWS_AS(fit_scaler(m), InvalidInputError);
}

TEST_CASE("finite differences match analytic derivatives") {
    const auto square0 = [](const VectorD& p) { return p[0] * p[0]; };
    const VectorD g = finite_diff_gradient(square0, {3.0}, 1e-5);
    CHECK(g[0] == doctest::Approx(6.0).epsilon(1e-6));

    const auto constant = [](const VectorD&) { return 4.25; };
    for (double gi : finite_diff_gradient(constant, {1.0, -2.0, 0.5}, 1e-5))
        CHECK(gi == 0.0);

    RngStream stream(11);
    VectorD p(8);
    for (double& v : p) v = stream.uniform(-2.0, 2.0);
    const auto sumsq = [](const VectorD& q) {
        double acc = 0.0;
        for (double v : q) acc += v * v;
        return acc;
    };
    const VectorD grad = finite_diff_gradient(sumsq, p, 1e-5);
    for (std::size_t k = 0; k < p.size(); ++k)
        CHECK(grad[k] == doctest::Approx(2.0 * p[k]).epsilon(1e-6));

    CHECK_THROWS_AS(finite_diff_gradient(sumsq, p, 0.0), InvalidInputError);
}

TEST_CASE("cholesky solve recovers known solutions") {
    // A = [[4,2],[2,3]], x = [1,-2] => b = [0,-4]
    Matrix a(2, 2);
    a.at(0, 0) = 4.0;
    a.at(0, 1) = 2.0;
    a.at(1, 0) = 2.0;
    a.at(1, 1) = 3.0;
    VectorD x;
    REQUIRE(cholesky_solve(a, {0.0, -4.0}, x));
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(-2.0));

    double trace = 0.0;
    REQUIRE(spd_inverse_trace(a, trace));
    // inv(A) = 1/8 [[3,-2],[-2,4]] => trace 7/8
    CHECK(trace == doctest::Approx(7.0 / 8.0));

    Matrix singular(2, 2, 1.0);
    VectorD unused;
    CHECK_FALSE(cholesky_solve(singular, {1.0, 1.0}, unused));
}
