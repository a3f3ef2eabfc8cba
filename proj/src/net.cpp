#include "regdbn/net.hpp"

namespace regdbn {

VectorD FeedforwardNet::hidden_forward(const VectorD& x) const {
    if (x.size() != input_width()) throw DimensionError("forward: input width mismatch");
    VectorD s = x;
    for (const DenseLayer& layer : hidden) {
        VectorD pre = matvec_t(layer.weights, s);
        for (std::size_t j = 0; j < pre.size(); ++j)
            pre[j] = activation.apply(pre[j] + layer.bias[j]);
        s = std::move(pre);
    }
    return s;
}

double FeedforwardNet::forward(const VectorD& x) const {
    const VectorD s = hidden_forward(x);
    return dot(output_weights, s) + output_bias;
}

VectorD FeedforwardNet::forward_batch(const Matrix& features) const {
    VectorD out(features.rows, 0.0);
    for (std::size_t r = 0; r < features.rows; ++r) out[r] = forward(features.row(r));
    return out;
}

std::size_t FeedforwardNet::parameter_count() const {
    std::size_t n = output_weights.size() + 1;
    for (const DenseLayer& l : hidden) n += l.weights.data.size() + l.bias.size();
    return n;
}

std::size_t FeedforwardNet::weight_count() const {
    std::size_t n = output_weights.size();
    for (const DenseLayer& l : hidden) n += l.weights.data.size();
    return n;
}

VectorD FeedforwardNet::to_parameters() const {
    VectorD p;
    p.reserve(parameter_count());
    for (const DenseLayer& l : hidden) {
        p.insert(p.end(), l.weights.data.begin(), l.weights.data.end());
        p.insert(p.end(), l.bias.begin(), l.bias.end());
    }
    p.insert(p.end(), output_weights.begin(), output_weights.end());
    p.push_back(output_bias);
    return p;
}

void FeedforwardNet::from_parameters(const VectorD& p) {
    if (p.size() != parameter_count())
        throw DimensionError("from_parameters: length mismatch");
    std::size_t k = 0;
    for (DenseLayer& l : hidden) {
        for (double& w : l.weights.data) w = p[k++];
        for (double& b : l.bias) b = p[k++];
    }
    for (double& w : output_weights) w = p[k++];
    output_bias = p[k++];
}

void FeedforwardNet::validate() const {
    activation.validate();
    std::size_t width = input_width();
    for (const DenseLayer& l : hidden) {
        if (l.weights.rows != width || l.bias.size() != l.weights.cols)
            throw DimensionError("FeedforwardNet: inconsistent layer shapes");
        if (!l.weights.all_finite() || !all_finite(l.bias))
            throw InvalidInputError("FeedforwardNet: non-finite parameter");
        width = l.weights.cols;
    }
    if (output_weights.size() != width)
        throw DimensionError("FeedforwardNet: output layer width mismatch");
    if (!all_finite(output_weights) || !std::isfinite(output_bias))
        throw InvalidInputError("FeedforwardNet: non-finite output parameter");
}

FeedforwardNet make_net(const std::vector<std::size_t>& layer_sizes,
                        const ActivationParams& act, RngStream& stream,
                        double weight_std) {
    if (layer_sizes.size() < 2)
        throw InvalidInputError("make_net: need at least input and one hidden size");
    FeedforwardNet net;
    net.activation = act;
    net.activation.sigma = 0.0; // supervised passes are deterministic
    for (std::size_t k = 0; k + 1 < layer_sizes.size(); ++k) {
        DenseLayer layer;
        layer.weights = Matrix(layer_sizes[k], layer_sizes[k + 1]);
        for (double& w : layer.weights.data) w = weight_std * stream.gaussian();
        layer.bias.assign(layer_sizes[k + 1], 0.0);
        net.hidden.push_back(std::move(layer));
    }
    net.output_weights.assign(layer_sizes.back(), 0.0);
    for (double& w : net.output_weights) w = weight_std * stream.gaussian();
    net.output_bias = 0.0;
    net.validate();
    return net;
}

} // namespace regdbn
