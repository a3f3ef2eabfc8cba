#pragma once

#include "regdbn/baselines.hpp"
#include "regdbn/bootstrap.hpp"
#include "regdbn/dbn.hpp"
#include "regdbn/finetune.hpp"
#include "regdbn/scaler.hpp"

namespace regdbn {

// Everything needed to train one net-based regressor end to end. The seeds
// inside pretrain/finetune are ignored by the builders, which draw from the
// repetition stream instead.
struct NetPipelineConfig {
    std::vector<std::size_t> hidden_sizes = {10, 10}; // input width is prepended
    ActivationParams activation;
    PretrainConfig pretrain;
    FineTuneConfig finetune;
};

// A trained net plus the normalization state used to train it. Features are
// min-max scaled to [0,1]; targets likewise, and predictions are mapped back
// to original units.
struct NetRegressor {
    FeedforwardNet net;
    Scaler feature_scaler;
    Scaler target_scaler;
    std::vector<std::string> feature_names;
    std::string model; // "regdbn" or "bayesnn"

    double predict(const VectorD& x) const;
    VectorD predict_batch(const Matrix& features) const;
};

struct NetTrainResult {
    NetRegressor regressor;
    std::vector<TrainerState> finetune_history;
    std::vector<VectorD> pretrain_history; // empty for bayesnn
};

// Pretrain a DBN on the normalized features, unfold, fine-tune.
NetTrainResult train_regdbn(const Dataset& train_set, const NetPipelineConfig& config,
                            RngStream& stream);

// Same structure and trainer, random initialization, no pretraining.
NetTrainResult train_bayesnn(const Dataset& train_set, const NetPipelineConfig& config,
                             RngStream& stream);

// Builders for the four standard models, for bootstrap_experiment.
ModelBuilder make_regdbn_builder(const NetPipelineConfig& config);
ModelBuilder make_bayesnn_builder(const NetPipelineConfig& config);
ModelBuilder make_nb_builder(const NbFitOptions& options = {});
ModelBuilder make_kr_builder(const BandwidthRule& rule = BandwidthRule::silverman());

// By CLI name: regdbn, bayesnn, nb, kr.
ModelBuilder make_builder(const std::string& name, const NetPipelineConfig& config);

} // namespace regdbn
