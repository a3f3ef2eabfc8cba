#include <doctest.h>

#include <cmath>

#include "regdbn/gradcheck.hpp"
#include "regdbn/rbm.hpp"

using namespace regdbn;

namespace {

ContinuousRbm zero_rbm(std::size_t nv, std::size_t nh, RbmMode mode,
                       ActivationParams act = {}) {
    ContinuousRbm rbm;
    rbm.weights = Matrix(nv, nh);
    rbm.visible_bias.assign(nv, 0.0);
    rbm.hidden_bias.assign(nh, 0.0);
    rbm.activation = act;
    rbm.mode = mode;
    return rbm;
}

ActivationParams plain_logistic() {
    return {0.0, 1.0, 0.0, 1.0};
}

} // namespace

TEST_CASE("hidden_prob: logistic of the pre-activation") {
    ContinuousRbm rbm = zero_rbm(3, 2, RbmMode::Binary);
    for (double p : rbm.hidden_prob({1.0, 0.0, 1.0})) CHECK(p == doctest::Approx(0.5));

    ContinuousRbm one = zero_rbm(1, 1, RbmMode::Binary);
    one.weights.at(0, 0) = std::log(3.0);
    CHECK(one.hidden_prob({1.0})[0] == doctest::Approx(0.75));

    RngStream stream(5);
    ContinuousRbm rnd = make_rbm(4, 3, RbmMode::Binary, {}, stream, 1.0);
    for (double p : rnd.hidden_prob({1.0, 0.0, 1.0, 1.0})) {
        CHECK(p > 0.0);
        CHECK(p < 1.0);
    }

    CHECK_THROWS_AS(rbm.hidden_prob({1.0}), DimensionError);
}

TEST_CASE("visible_prob: symmetric formulation") {
    ContinuousRbm rbm = zero_rbm(2, 2, RbmMode::Binary);
    for (double p : rbm.visible_prob({0.0, 1.0})) CHECK(p == doctest::Approx(0.5));

    ContinuousRbm one = zero_rbm(1, 1, RbmMode::Binary);
    one.weights.at(0, 0) = -std::log(3.0);
    CHECK(one.visible_prob({1.0})[0] == doctest::Approx(0.25));

    // mirroring swaps the roles of the two layers
    RngStream stream(8);
    ContinuousRbm rnd = make_rbm(3, 2, RbmMode::Binary, {}, stream, 0.7);
    rnd.visible_bias = {0.1, -0.4, 0.2};
    rnd.hidden_bias = {0.3, -0.2};
    ContinuousRbm mirrored = rnd;
    mirrored.weights = Matrix(rnd.n_hidden(), rnd.n_visible());
    for (std::size_t i = 0; i < rnd.n_visible(); ++i)
        for (std::size_t j = 0; j < rnd.n_hidden(); ++j)
            mirrored.weights.at(j, i) = rnd.weights.at(i, j);
    std::swap(mirrored.visible_bias, mirrored.hidden_bias);
    const VectorD h{1.0, 0.0};
    const VectorD via_visible = rnd.visible_prob(h);
    const VectorD via_mirror = mirrored.hidden_prob(h);
    for (std::size_t i = 0; i < via_visible.size(); ++i)
        CHECK(via_visible[i] == doctest::Approx(via_mirror[i]));
}

TEST_CASE("hidden_activation: noise-free limits") {
    ContinuousRbm rbm = zero_rbm(2, 3, RbmMode::Continuous, plain_logistic());
    for (double s : rbm.hidden_activation({0.3, 0.8}, nullptr))
        CHECK(s == doctest::Approx(0.5));

    ContinuousRbm sym = zero_rbm(2, 2, RbmMode::Continuous, {-1.0, 1.0, 0.0, 1.0});
    for (double s : sym.hidden_activation({0.5, 0.5}, nullptr))
        CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("hidden_activation: stubbed noise draw matches direct evaluation") {
    ActivationParams act{0.0, 1.0, 0.5, 1.0};
    RngStream init(3);
    ContinuousRbm rbm = make_rbm(2, 3, RbmMode::Continuous, act, init, 0.5);
    rbm.hidden_bias = {0.1, -0.2, 0.3};

    const VectorD v{0.4, 0.9};
    RngStream noise(777);
    const VectorD got = rbm.hidden_activation(v, &noise);

    RngStream replay(777); // same draws, in unit order
    const VectorD pre = matvec_t(rbm.weights, v);
    for (std::size_t j = 0; j < 3; ++j) {
        const double z = replay.gaussian();
        const double expect = act.apply(pre[j] + rbm.hidden_bias[j] + 0.5 * z);
        CHECK(got[j] == doctest::Approx(expect).epsilon(1e-15));
    }
}

TEST_CASE("visible_activation mirrors the hidden path") {
    ContinuousRbm rbm = zero_rbm(3, 2, RbmMode::Continuous, plain_logistic());
    for (double s : rbm.visible_activation({0.2, 0.7}, nullptr))
        CHECK(s == doctest::Approx(0.5));

    ContinuousRbm sym = zero_rbm(2, 2, RbmMode::Continuous, {-1.0, 1.0, 0.0, 1.0});
    for (double s : sym.visible_activation({0.0, 0.0}, nullptr))
        CHECK(s == doctest::Approx(0.0));

    ActivationParams act{0.0, 1.0, 0.5, 1.0};
    RngStream init(4);
    ContinuousRbm rnd = make_rbm(3, 2, RbmMode::Continuous, act, init, 0.5);
    rnd.visible_bias = {0.2, -0.1, 0.4};
    const VectorD h{0.6, 0.3};
    RngStream noise(31);
    const VectorD got = rnd.visible_activation(h, &noise);
    RngStream replay(31);
    const VectorD pre = matvec(rnd.weights, h);
    for (std::size_t i = 0; i < 3; ++i) {
        const double z = replay.gaussian();
        CHECK(got[i] ==
              doctest::Approx(act.apply(pre[i] + rnd.visible_bias[i] + 0.5 * z)));
    }
}

TEST_CASE("activation outputs stay strictly inside the asymptotes") {
    RngStream stream(17);
    ActivationParams act{-0.5, 2.0, 0.3, 1.7};
    ContinuousRbm rbm = make_rbm(4, 3, RbmMode::Continuous, act, stream, 2.0);
    RngStream noise(18);
    for (int rep = 0; rep < 200; ++rep) {
        VectorD v(4);
        for (double& x : v) x = noise.next_uniform();
        for (double s : rbm.hidden_activation(v, &noise)) {
            CHECK(s > act.theta_low);
            CHECK(s < act.theta_high);
        }
    }
}

TEST_CASE("sigma=0 continuous activation equals the binary probability") {
    RngStream stream(23);
    ContinuousRbm cont = make_rbm(3, 2, RbmMode::Continuous, plain_logistic(), stream, 1.0);
    cont.hidden_bias = {0.4, -0.7};
    ContinuousRbm bin = cont;
    bin.mode = RbmMode::Binary;
    const VectorD v{0.2, 0.9, 0.5};
    const VectorD a = cont.hidden_activation(v, nullptr);
    const VectorD p = bin.hidden_prob(v);
    for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == doctest::Approx(p[j]));
}

TEST_CASE("cd1_apply: stubbed chains") {
    SUBCASE("reconstruction equal to data means zero update") {
        RngStream stream(2);
        ContinuousRbm rbm = make_rbm(3, 2, RbmMode::Continuous, {}, stream, 0.4);
        const ContinuousRbm before = rbm;
        Matrix batch(2, 3);
        batch.data = {0.1, 0.5, 0.9, 0.3, 0.2, 0.8};
        Cd1Chain chain;
        chain.h0 = Matrix(2, 2);
        chain.h0.data = {0.7, 0.1, 0.4, 0.6};
        chain.v1 = batch;    // v1 == v0
        chain.h1 = chain.h0; // h1 == h0
        cd1_apply(rbm, batch, chain, 0.5);
        CHECK(rbm.weights.data == before.weights.data);
        CHECK(rbm.visible_bias == before.visible_bias);
        CHECK(rbm.hidden_bias == before.hidden_bias);
    }

    SUBCASE("hand-executed one-unit update") {
        ContinuousRbm rbm = zero_rbm(1, 1, RbmMode::Binary);
        Matrix batch(1, 1);
        batch.at(0, 0) = 1.0; // v0 = 1
        Cd1Chain chain;
        chain.h0 = Matrix(1, 1, 1.0); // h0 = 1
        chain.v1 = Matrix(1, 1, 0.0); // v1 = 0
        chain.h1 = Matrix(1, 1, 1.0); // h1 = 1
        cd1_apply(rbm, batch, chain, 0.1);
        CHECK(rbm.weights.at(0, 0) == doctest::Approx(0.1)); // 0.1 * (1*1 - 0*1)
        CHECK(rbm.hidden_bias[0] == doctest::Approx(0.0));   // 0.1 * (1 - 1)
        CHECK(rbm.visible_bias[0] == doctest::Approx(0.1));  // 0.1 * (1 - 0)
    }

    SUBCASE("empty batch is rejected") {
        ContinuousRbm rbm = zero_rbm(1, 1, RbmMode::Binary);
        Matrix batch(0, 1);
        RngStream stream(1);
        CHECK_THROWS_AS(cd1_update(rbm, batch, 0.1, stream), InvalidInputError);
    }
}

TEST_CASE("cd1_update: reconstruction error falls over twenty epochs") {
    // two prototype patterns with noise
    RngStream data_stream(101);
    Matrix batch(40, 6);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const bool left = r % 2 == 0;
        for (std::size_t c = 0; c < 6; ++c) {
            const double base = (left == (c < 3)) ? 0.85 : 0.15;
            batch.at(r, c) = std::clamp(base + 0.08 * data_stream.gaussian(), 0.0, 1.0);
        }
    }
    RngStream init(7);
    ContinuousRbm rbm = make_rbm(6, 4, RbmMode::Continuous, {}, init, 0.01);
    RngStream chain_stream(8);
    double first = 0.0, last = 0.0;
    for (int epoch = 0; epoch < 20; ++epoch) {
        const Cd1Stats stats = cd1_update(rbm, batch, 1.0, chain_stream);
        if (epoch == 0) first = stats.recon_error;
        last = reconstruction_error(rbm, batch);
    }
    CHECK(last < first);
}

TEST_CASE("reconstruction_error: exact and hand-computed cases") {
    ContinuousRbm rbm = zero_rbm(2, 2, RbmMode::Continuous, plain_logistic());
    Matrix fixed_point(1, 2, 0.5); // forward and back both give 0.5 everywhere
    CHECK(reconstruction_error(rbm, fixed_point) == doctest::Approx(0.0));

    ContinuousRbm one = zero_rbm(1, 1, RbmMode::Continuous, plain_logistic());
    Matrix batch(1, 1, 1.0); // reconstruction is logistic(0) = 0.5
    CHECK(reconstruction_error(one, batch) == doctest::Approx(0.25));

    RngStream stream(9);
    ContinuousRbm rnd = make_rbm(3, 2, RbmMode::Continuous, {}, stream, 1.0);
    Matrix data(5, 3);
    for (double& v : data.data) v = stream.next_uniform();
    CHECK(reconstruction_error(rnd, data) >= 0.0);
}

namespace {

VectorD flatten_rbm(const ContinuousRbm& rbm) {
    VectorD p = rbm.weights.data;
    p.insert(p.end(), rbm.visible_bias.begin(), rbm.visible_bias.end());
    p.insert(p.end(), rbm.hidden_bias.begin(), rbm.hidden_bias.end());
    return p;
}

ContinuousRbm with_params(ContinuousRbm rbm, const VectorD& p) {
    std::size_t k = 0;
    for (double& w : rbm.weights.data) w = p[k++];
    for (double& c : rbm.visible_bias) c = p[k++];
    for (double& b : rbm.hidden_bias) b = p[k++];
    return rbm;
}

VectorD flatten_gradient(const RbmGradient& g) {
    VectorD v = g.d_weights.data;
    v.insert(v.end(), g.d_visible_bias.begin(), g.d_visible_bias.end());
    v.insert(v.end(), g.d_hidden_bias.begin(), g.d_hidden_bias.end());
    return v;
}

} // namespace

TEST_CASE("exact_loglik_gradient: enumerated oracle values") {
    SUBCASE("one-unit machine with a single observation") {
        ContinuousRbm rbm = zero_rbm(1, 1, RbmMode::Binary);
        Matrix batch(1, 1, 1.0);
        const RbmGradient g = exact_loglik_gradient(rbm, batch);
        CHECK(g.d_weights.at(0, 0) == doctest::Approx(0.25)); // 0.5 - 1/4
        CHECK(g.d_visible_bias[0] == doctest::Approx(0.5));   // 1 - 1/2
        CHECK(g.d_hidden_bias[0] == doctest::Approx(0.0));
    }

    SUBCASE("data equal to the model distribution is stationary") {
        ContinuousRbm rbm = zero_rbm(2, 2, RbmMode::Binary);
        Matrix batch(4, 2); // all visible configurations once: uniform, as the model
        batch.data = {0, 0, 0, 1, 1, 0, 1, 1};
        const VectorD g = flatten_gradient(exact_loglik_gradient(rbm, batch));
        for (double gi : g) CHECK(gi == doctest::Approx(0.0).epsilon(1e-12));
    }

    SUBCASE("matches finite differences of the enumerated log-likelihood") {
        RngStream stream(55);
        ContinuousRbm rbm = make_rbm(2, 2, RbmMode::Binary, {}, stream, 1.0);
        for (double& b : rbm.visible_bias) b = stream.gaussian();
        for (double& b : rbm.hidden_bias) b = stream.gaussian();
        Matrix batch(6, 2);
        for (double& v : batch.data) v = stream.next_uniform() < 0.4 ? 1.0 : 0.0;

        const VectorD analytic = flatten_gradient(exact_loglik_gradient(rbm, batch));
        const auto f = [&](const VectorD& p) {
            return exact_loglik(with_params(rbm, p), batch);
        };
        const VectorD numeric = finite_diff_gradient(f, flatten_rbm(rbm), 1e-5);
        for (std::size_t k = 0; k < analytic.size(); ++k)
            CHECK(std::abs(analytic[k] - numeric[k]) < 1e-6);
    }

    SUBCASE("size limit enforced") {
        ContinuousRbm rbm = zero_rbm(8, 8, RbmMode::Binary);
        Matrix batch(1, 8);
        CHECK_THROWS_AS(exact_loglik_gradient(rbm, batch), InvalidInputError);
    }
}

TEST_CASE("cd1 direction aligns with the exact likelihood gradient") {
    RngStream master(2024);
    int aligned = 0;
    const int trials = 20; // the acceptance suite runs the full hundred
    for (int trial = 0; trial < trials; ++trial) {
        ContinuousRbm rbm = make_rbm(2, 2, RbmMode::Binary, {}, master, 0.8);
        for (double& b : rbm.visible_bias) b = 0.5 * master.gaussian();
        for (double& b : rbm.hidden_bias) b = 0.5 * master.gaussian();

        Matrix batch(20, 2);
        const double p0 = master.uniform(0.2, 0.8), p1 = master.uniform(0.2, 0.8);
        for (std::size_t r = 0; r < batch.rows; ++r) {
            batch.at(r, 0) = master.next_uniform() < p0 ? 1.0 : 0.0;
            batch.at(r, 1) = master.next_uniform() < p1 ? 1.0 : 0.0;
        }

        const VectorD exact = flatten_gradient(exact_loglik_gradient(rbm, batch));

        VectorD cd_dir(exact.size(), 0.0);
        RngStream chains = master.child("chains-" + std::to_string(trial));
        for (int c = 0; c < 500; ++c) {
            ContinuousRbm step = rbm;
            cd1_update(step, batch, 1.0, chains);
            VectorD delta = flatten_rbm(step);
            const VectorD base = flatten_rbm(rbm);
            for (std::size_t k = 0; k < delta.size(); ++k)
                cd_dir[k] += delta[k] - base[k];
        }
        if (dot(cd_dir, exact) > 0.0) ++aligned;
    }
    CHECK(aligned >= 19);
}
