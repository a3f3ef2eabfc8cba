#include <doctest.h>

#include "regdbn/dbn.hpp"
#include "regdbn/model_io.hpp"

using namespace regdbn;

namespace {

Matrix random_features(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    RngStream stream(seed);
    Matrix m(rows, cols);
    for (double& v : m.data) v = stream.next_uniform();
    return m;
}

} // namespace

TEST_CASE("pretrain: one epoch on one layer equals a manual cd1 pass") {
    RngStream init(40);
    DbnModel dbn = make_dbn({4, 3}, RbmMode::Continuous, {}, init);
    ContinuousRbm manual = dbn.layers[0];

    const Matrix features = random_features(5, 4, 41);
    PretrainConfig config;
    config.epochs = 1;
    config.learning_rate = 0.7;
    config.batch_size = 2; // 5 rows -> batches of 2, 2, 1
    config.seed = 99;

    const auto history = pretrain(dbn, features, config);
    REQUIRE(history.size() == 1);
    REQUIRE(history[0].size() == 1);

    RngStream stream = RngStream(config.seed).child("pretrain").child("layer-0");
    double err_acc = 0.0;
    for (std::size_t start = 0; start < features.rows; start += config.batch_size) {
        const std::size_t n = std::min(config.batch_size, features.rows - start);
        Matrix batch(n, 4);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < 4; ++c) batch.at(r, c) = features.at(start + r, c);
        err_acc += cd1_update(manual, batch, config.learning_rate, stream).recon_error *
                   static_cast<double>(n);
    }
    CHECK(dbn.layers[0].weights.data == manual.weights.data);
    CHECK(dbn.layers[0].visible_bias == manual.visible_bias);
    CHECK(dbn.layers[0].hidden_bias == manual.hidden_bias);
    CHECK(history[0][0] == doctest::Approx(err_acc / 5.0));
}

TEST_CASE("pretrain: layer 2 trains on layer 1's propagated output") {
    RngStream init(50);
    DbnModel dbn = make_dbn({4, 3, 2}, RbmMode::Continuous, {}, init);
    const ContinuousRbm layer1_init = dbn.layers[0];
    const ContinuousRbm layer2_init = dbn.layers[1];

    const Matrix features = random_features(12, 4, 51);
    PretrainConfig config;
    config.epochs = 3;
    config.learning_rate = 0.5;
    config.batch_size = 4;
    config.seed = 7;
    pretrain(dbn, features, config);

    // replay the greedy schedule by hand
    ContinuousRbm layer1 = layer1_init;
    RngStream s1 = RngStream(config.seed).child("pretrain").child("layer-0");
    for (std::size_t epoch = 0; epoch < 3; ++epoch)
        for (std::size_t start = 0; start < features.rows; start += 4) {
            Matrix batch(4, 4);
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 4; ++c)
                    batch.at(r, c) = features.at(start + r, c);
            cd1_update(layer1, batch, 0.5, s1);
        }

    Matrix hidden_out(features.rows, 3);
    for (std::size_t r = 0; r < features.rows; ++r) {
        const VectorD h = layer1.hidden_activation(features.row(r), nullptr);
        for (std::size_t j = 0; j < 3; ++j) hidden_out.at(r, j) = h[j];
    }

    ContinuousRbm layer2 = layer2_init;
    RngStream s2 = RngStream(config.seed).child("pretrain").child("layer-1");
    for (std::size_t epoch = 0; epoch < 3; ++epoch)
        for (std::size_t start = 0; start < hidden_out.rows; start += 4) {
            Matrix batch(4, 3);
            for (std::size_t r = 0; r < 4; ++r)
                for (std::size_t c = 0; c < 3; ++c)
                    batch.at(r, c) = hidden_out.at(start + r, c);
            cd1_update(layer2, batch, 0.5, s2);
        }

    CHECK(dbn.layers[0].weights.data == layer1.weights.data);
    CHECK(dbn.layers[1].weights.data == layer2.weights.data);
    CHECK(dbn.layers[1].hidden_bias == layer2.hidden_bias);
}

TEST_CASE("pretrain: greedy order leaves lower layers untouched by upper ones") {
    const Matrix features = random_features(20, 4, 61);
    PretrainConfig config;
    config.epochs = 4;
    config.seed = 3;

    RngStream init_a(60);
    DbnModel deep = make_dbn({4, 3, 2}, RbmMode::Continuous, {}, init_a);
    RngStream init_b(60);
    DbnModel shallow;
    shallow.layers.push_back(make_dbn({4, 3, 2}, RbmMode::Continuous, {}, init_b).layers[0]);

    pretrain(deep, features, config);
    pretrain(shallow, features, config);
    CHECK(deep.layers[0].weights.data == shallow.layers[0].weights.data);
    CHECK(deep.layers[0].hidden_bias == shallow.layers[0].hidden_bias);
}

TEST_CASE("pretrain: twenty epochs lower every layer's reconstruction error") {
    RngStream init(70);
    DbnModel dbn = make_dbn({6, 5, 4}, RbmMode::Continuous, {}, init);

    RngStream data_stream(71);
    Matrix features(60, 6);
    for (std::size_t r = 0; r < features.rows; ++r)
        for (std::size_t c = 0; c < 6; ++c) {
            const double base = (r % 3 == c % 3) ? 0.8 : 0.2;
            features.at(r, c) =
                std::clamp(base + 0.1 * data_stream.gaussian(), 0.0, 1.0);
        }

    PretrainConfig config;
    config.epochs = 20;
    config.learning_rate = 1.0;
    config.seed = 13;
    const auto history = pretrain(dbn, features, config);
    REQUIRE(history.size() == 2);
    for (const VectorD& layer : history) {
        REQUIRE(layer.size() == 20);
        CHECK(layer.back() < layer.front());
    }
}

TEST_CASE("pretrain: input validation") {
    RngStream init(80);
    DbnModel dbn = make_dbn({3, 2}, RbmMode::Continuous, {}, init);
    PretrainConfig config;

    Matrix bad(2, 3, 1.5); // outside [0,1]
    CHECK_THROWS_AS(pretrain(dbn, bad, config), InvalidInputError);

    Matrix wrong(2, 4, 0.5);
    CHECK_THROWS_AS(pretrain(dbn, wrong, config), DimensionError);

    config.learning_rate = 0.0;
    Matrix ok(2, 3, 0.5);
    CHECK_THROWS_AS(pretrain(dbn, ok, config), InvalidInputError);
}

TEST_CASE("propagate_up: single layer and zero-parameter stack") {
    RngStream init(90);
    DbnModel one = make_dbn({4, 3}, RbmMode::Continuous, {}, init, 0.5);
    const VectorD v{0.1, 0.9, 0.4, 0.6};
    CHECK(propagate_up(one, v) == one.layers[0].hidden_activation(v, nullptr));

    DbnModel zero;
    ContinuousRbm l1;
    l1.weights = Matrix(2, 3);
    l1.visible_bias.assign(2, 0.0);
    l1.hidden_bias.assign(3, 0.0);
    ContinuousRbm l2;
    l2.weights = Matrix(3, 2);
    l2.visible_bias.assign(3, 0.0);
    l2.hidden_bias.assign(2, 0.0);
    zero.layers = {l1, l2};
    for (double s : propagate_up(zero, {0.3, 0.7})) CHECK(s == doctest::Approx(0.5));

    RngStream init2(91);
    DbnModel rnd = make_dbn({3, 4, 2}, RbmMode::Continuous, {}, init2, 1.5);
    for (double s : propagate_up(rnd, {0.2, 0.8, 0.5})) {
        CHECK(s > 0.0);
        CHECK(s < 1.0);
    }

    CHECK_THROWS_AS(propagate_up(one, {0.5}), DimensionError);
}

TEST_CASE("unfold: copies hidden parameters and initializes one output unit") {
    RngStream init(95);
    DbnModel dbn = make_dbn({4, 3, 2}, RbmMode::Continuous, {}, init, 0.3);

    RngStream out_a(96);
    const FeedforwardNet net = unfold(dbn, out_a);
    REQUIRE(net.hidden.size() == 2);
    CHECK(net.hidden[0].weights.data == dbn.layers[0].weights.data);
    CHECK(net.hidden[0].bias == dbn.layers[0].hidden_bias);
    CHECK(net.hidden[1].weights.data == dbn.layers[1].weights.data);
    CHECK(net.output_weights.size() == 2);

    RngStream out_b(96);
    const FeedforwardNet net2 = unfold(dbn, out_b);
    CHECK(net.output_weights == net2.output_weights);
    CHECK(net.output_bias == net2.output_bias);

    // weight-copy fidelity: the net's hidden pass equals propagate_up
    RngStream probe(97);
    for (int rep = 0; rep < 25; ++rep) {
        VectorD v(4);
        for (double& x : v) x = probe.next_uniform();
        const VectorD a = propagate_up(dbn, v);
        const VectorD b = net.hidden_forward(v);
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
    }
}

TEST_CASE("dbn serialization round-trips bit-exactly") {
    RngStream init(100);
    DbnModel dbn = make_dbn({5, 4, 3}, RbmMode::Continuous, {0.0, 1.0, 0.2, 1.3}, init);
    const Matrix features = random_features(10, 5, 101);
    PretrainConfig config;
    config.epochs = 2;
    config.seed = 1;
    pretrain(dbn, features, config);

    const DbnModel back = load_dbn(save_dbn(dbn));
    REQUIRE(back.layers.size() == dbn.layers.size());
    for (std::size_t k = 0; k < dbn.layers.size(); ++k) {
        CHECK(back.layers[k].weights.data == dbn.layers[k].weights.data);
        CHECK(back.layers[k].visible_bias == dbn.layers[k].visible_bias);
        CHECK(back.layers[k].hidden_bias == dbn.layers[k].hidden_bias);
        CHECK(back.layers[k].activation.sigma == dbn.layers[k].activation.sigma);
        CHECK(back.layers[k].mode == dbn.layers[k].mode);
    }
}
