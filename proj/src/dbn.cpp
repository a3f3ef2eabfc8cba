#include "regdbn/dbn.hpp"

#include <string>

namespace regdbn {

namespace {

VectorD layer_output(const ContinuousRbm& rbm, const VectorD& v) {
    return rbm.mode == RbmMode::Binary ? rbm.hidden_prob(v)
                                       : rbm.hidden_activation(v, nullptr);
}

Matrix layer_output(const ContinuousRbm& rbm, const Matrix& batch) {
    Matrix out(batch.rows, rbm.n_hidden());
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const VectorD h = layer_output(rbm, batch.row(r));
        for (std::size_t j = 0; j < h.size(); ++j) out.at(r, j) = h[j];
    }
    return out;
}

} // namespace

void DbnModel::validate() const {
    if (layers.empty()) throw InvalidInputError("DbnModel: needs at least one RBM");
    for (std::size_t k = 0; k < layers.size(); ++k) {
        layers[k].validate();
        if (k > 0 && layers[k].n_visible() != layers[k - 1].n_hidden())
            throw DimensionError("DbnModel: layer " + std::to_string(k) +
                                 " width does not match previous hidden size");
    }
}

DbnModel make_dbn(const std::vector<std::size_t>& sizes, RbmMode mode,
                  const ActivationParams& act, RngStream& stream,
                  double weight_std) {
    if (sizes.size() < 2)
        throw InvalidInputError("make_dbn: need at least two layer sizes");
    DbnModel dbn;
    for (std::size_t k = 0; k + 1 < sizes.size(); ++k)
        dbn.layers.push_back(
            make_rbm(sizes[k], sizes[k + 1], mode, act, stream, weight_std));
    dbn.validate();
    return dbn;
}

std::vector<VectorD> pretrain(DbnModel& dbn, const Matrix& features,
                              const PretrainConfig& config) {
    config.validate();
    dbn.validate();
    if (features.rows == 0) throw InvalidInputError("pretrain: empty feature matrix");
    if (features.cols != dbn.layers.front().n_visible())
        throw DimensionError("pretrain: feature width != first layer n_visible");
    for (double x : features.data)
        if (!(x >= 0.0 && x <= 1.0))
            throw InvalidInputError("pretrain: features must lie in [0,1]");

    RngStream stream = RngStream(config.seed).child("pretrain");
    std::vector<VectorD> history;
    Matrix input = features;

    for (std::size_t k = 0; k < dbn.layers.size(); ++k) {
        ContinuousRbm& rbm = dbn.layers[k];
        RngStream layer_stream = stream.child("layer-" + std::to_string(k));
        VectorD errors;
        errors.reserve(config.epochs);
        for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
            double err_acc = 0.0;
            for (std::size_t start = 0; start < input.rows; start += config.batch_size) {
                const std::size_t n = std::min(config.batch_size, input.rows - start);
                Matrix batch(n, input.cols);
                for (std::size_t r = 0; r < n; ++r)
                    for (std::size_t c = 0; c < input.cols; ++c)
                        batch.at(r, c) = input.at(start + r, c);
                try {
                    const Cd1Stats st = cd1_update(rbm, batch, config.learning_rate,
                                                   layer_stream, config.cd1);
                    err_acc += st.recon_error * static_cast<double>(n);
                } catch (const DivergenceError& e) {
                    throw DivergenceError("pretrain: layer " + std::to_string(k + 1) +
                                          " epoch " + std::to_string(epoch + 1) + ": " +
                                          e.what());
                }
            }
            errors.push_back(err_acc / static_cast<double>(input.rows));
        }
        history.push_back(std::move(errors));
        if (k + 1 < dbn.layers.size()) input = layer_output(rbm, input);
    }
    return history;
}

VectorD propagate_up(const DbnModel& dbn, const VectorD& v) {
    if (dbn.layers.empty()) throw InvalidInputError("propagate_up: empty DBN");
    if (v.size() != dbn.layers.front().n_visible())
        throw DimensionError("propagate_up: input width mismatch");
    VectorD s = v;
    for (const ContinuousRbm& rbm : dbn.layers) s = layer_output(rbm, s);
    return s;
}

Matrix propagate_up(const DbnModel& dbn, const Matrix& features) {
    Matrix out = features;
    for (const ContinuousRbm& rbm : dbn.layers) out = layer_output(rbm, out);
    return out;
}

FeedforwardNet unfold(const DbnModel& dbn, RngStream& stream,
                      double output_weight_std) {
    dbn.validate();
    FeedforwardNet net;
    net.activation = dbn.layers.front().activation;
    net.activation.sigma = 0.0;
    for (const ContinuousRbm& rbm : dbn.layers) {
        DenseLayer layer;
        layer.weights = rbm.weights;
        layer.bias = rbm.hidden_bias;
        net.hidden.push_back(std::move(layer));
    }
    net.output_weights.assign(dbn.layers.back().n_hidden(), 0.0);
    for (double& w : net.output_weights) w = output_weight_std * stream.gaussian();
    net.output_bias = 0.0;
    net.validate();
    return net;
}

} // namespace regdbn
