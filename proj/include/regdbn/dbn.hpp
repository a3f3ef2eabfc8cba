#pragma once

#include "regdbn/net.hpp"
#include "regdbn/rbm.hpp"

namespace regdbn {

// Ordered stack of RBMs: n_hidden of layer k equals n_visible of layer k+1.
struct DbnModel {
    std::vector<ContinuousRbm> layers;

    std::vector<std::size_t> layer_sizes() const {
        std::vector<std::size_t> sizes;
        if (layers.empty()) return sizes;
        sizes.push_back(layers.front().n_visible());
        for (const ContinuousRbm& l : layers) sizes.push_back(l.n_hidden());
        return sizes;
    }

    void validate() const;
};

struct PretrainConfig {
    std::size_t epochs = 20;   // one iteration = one full pass over the data
    double learning_rate = 1.0;
    std::size_t batch_size = 100;
    std::uint64_t seed = 0;
    Cd1Options cd1;

    void validate() const {
        if (epochs < 1) throw InvalidInputError("PretrainConfig: epochs >= 1");
        if (!(learning_rate > 0.0 && learning_rate <= 10.0))
            throw InvalidInputError("PretrainConfig: learning_rate in (0, 10]");
        if (batch_size < 1) throw InvalidInputError("PretrainConfig: batch_size >= 1");
    }
};

// e.g. sizes {6, 10, 10} builds RBMs 6x10 and 10x10.
DbnModel make_dbn(const std::vector<std::size_t>& sizes, RbmMode mode,
                  const ActivationParams& act, RngStream& stream,
                  double weight_std = 0.01);

// Greedy layer-wise CD-1 pretraining. Layer 1 trains on the raw features;
// layer k trains on the deterministic (noise-off) output of layers 1..k-1.
// Returns one reconstruction-error entry per epoch per layer, each the
// pre-update error averaged over that epoch's batches.
std::vector<VectorD> pretrain(DbnModel& dbn, const Matrix& features,
                              const PretrainConfig& config);

// Deterministic (noise-off) layer-by-layer hidden pass.
VectorD propagate_up(const DbnModel& dbn, const VectorD& v);
Matrix propagate_up(const DbnModel& dbn, const Matrix& features);

// Copy the stack into a feedforward regressor; hidden weights/biases are
// copied bit-exactly, the single linear output unit is freshly initialized
// from the stream.
FeedforwardNet unfold(const DbnModel& dbn, RngStream& stream,
                      double output_weight_std = 0.01);

} // namespace regdbn
