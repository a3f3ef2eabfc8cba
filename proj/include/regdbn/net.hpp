#pragma once

#include "regdbn/matrix.hpp"
#include "regdbn/rbm.hpp"

namespace regdbn {

struct DenseLayer {
    Matrix weights; // n_in x n_out
    VectorD bias;   // length n_out
};

// The unfolded supervised regressor: sigmoid hidden layers (same transfer
// function as the RBMs, noise forced off) and a single linear output unit.
// Forward passes are deterministic; trained nets are immutable and shareable.
struct FeedforwardNet {
    std::vector<DenseLayer> hidden;
    VectorD output_weights;
    double output_bias = 0.0;
    ActivationParams activation;

    std::size_t input_width() const {
        return hidden.empty() ? output_weights.size() : hidden.front().weights.rows;
    }

    // Activations of the last hidden layer.
    VectorD hidden_forward(const VectorD& x) const;

    double forward(const VectorD& x) const;
    VectorD forward_batch(const Matrix& features) const;

    // Flat parameter layout: per hidden layer weights (row-major) then bias,
    // then output weights, then output bias.
    std::size_t parameter_count() const;
    std::size_t weight_count() const; // weights only, biases excluded
    VectorD to_parameters() const;
    void from_parameters(const VectorD& p);

    void validate() const;
};

// Random net with the given layer sizes, e.g. {6, 10, 10} hidden sizes with
// input width 6 meaning sizes[0] is the input width. Gaussian(0, std)
// weights, zero biases.
FeedforwardNet make_net(const std::vector<std::size_t>& layer_sizes,
                        const ActivationParams& act, RngStream& stream,
                        double weight_std = 0.01);

} // namespace regdbn
