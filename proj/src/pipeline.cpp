#include "regdbn/pipeline.hpp"

namespace regdbn {

double NetRegressor::predict(const VectorD& x) const {
    Matrix row(1, x.size());
    for (std::size_t j = 0; j < x.size(); ++j) row.at(0, j) = x[j];
    const Matrix scaled = apply_scaler(feature_scaler, row);
    const double y = net.forward(scaled.row(0));
    return invert_scaler(target_scaler, VectorD{y})[0];
}

VectorD NetRegressor::predict_batch(const Matrix& features) const {
    const Matrix scaled = apply_scaler(feature_scaler, features);
    VectorD out = net.forward_batch(scaled);
    return invert_scaler(target_scaler, out);
}

namespace {

struct Normalized {
    Scaler feature_scaler;
    Scaler target_scaler;
    Matrix features;
    VectorD targets;
};

Normalized normalize(const Dataset& train_set) {
    train_set.validate();
    Normalized n;
    n.feature_scaler = fit_scaler(train_set.features);
    n.target_scaler = fit_scaler(train_set.targets);
    n.features = apply_scaler(n.feature_scaler, train_set.features);
    n.targets = apply_scaler(n.target_scaler, train_set.targets);
    return n;
}

std::vector<std::size_t> full_sizes(const Dataset& train_set,
                                    const NetPipelineConfig& config) {
    std::vector<std::size_t> sizes{train_set.n_features()};
    sizes.insert(sizes.end(), config.hidden_sizes.begin(), config.hidden_sizes.end());
    return sizes;
}

} // namespace

NetTrainResult train_regdbn(const Dataset& train_set, const NetPipelineConfig& config,
                            RngStream& stream) {
    Normalized norm = normalize(train_set);
    NetTrainResult result;

    RngStream init_stream = stream.child("dbn-init");
    DbnModel dbn = make_dbn(full_sizes(train_set, config), RbmMode::Continuous,
                            config.activation, init_stream);

    PretrainConfig pc = config.pretrain;
    pc.seed = stream.child("pretrain-seed").next_u64();
    result.pretrain_history = pretrain(dbn, norm.features, pc);

    RngStream unfold_stream = stream.child("unfold");
    result.regressor.net = unfold(dbn, unfold_stream);
    result.finetune_history =
        train(result.regressor.net, norm.features, norm.targets, config.finetune);

    result.regressor.feature_scaler = std::move(norm.feature_scaler);
    result.regressor.target_scaler = std::move(norm.target_scaler);
    result.regressor.feature_names = train_set.feature_names;
    result.regressor.model = "regdbn";
    return result;
}

NetTrainResult train_bayesnn(const Dataset& train_set, const NetPipelineConfig& config,
                             RngStream& stream) {
    Normalized norm = normalize(train_set);
    NetTrainResult result;

    RngStream init_stream = stream.child("bayesnn-init");
    result.regressor.net =
        make_net(full_sizes(train_set, config), config.activation, init_stream);
    result.finetune_history =
        train(result.regressor.net, norm.features, norm.targets, config.finetune);

    result.regressor.feature_scaler = std::move(norm.feature_scaler);
    result.regressor.target_scaler = std::move(norm.target_scaler);
    result.regressor.feature_names = train_set.feature_names;
    result.regressor.model = "bayesnn";
    return result;
}

namespace {

struct NetPredictor : Predictor {
    NetRegressor regressor;
    explicit NetPredictor(NetRegressor r) : regressor(std::move(r)) {}
    double predict(const VectorD& x) const override { return regressor.predict(x); }
};

struct NbPredictor : Predictor {
    NbModel model;
    explicit NbPredictor(NbModel m) : model(std::move(m)) {}
    double predict(const VectorD& x) const override { return predict_nb(model, x); }
};

struct KrPredictor : Predictor {
    KernelModel model;
    explicit KrPredictor(KernelModel m) : model(std::move(m)) {}
    double predict(const VectorD& x) const override { return predict_kr(model, x); }
};

} // namespace

ModelBuilder make_regdbn_builder(const NetPipelineConfig& config) {
    return {"regdbn", [config](const Dataset& train_set, RngStream& stream) {
                return std::unique_ptr<Predictor>(new NetPredictor(
                    train_regdbn(train_set, config, stream).regressor));
            }};
}

ModelBuilder make_bayesnn_builder(const NetPipelineConfig& config) {
    return {"bayesnn", [config](const Dataset& train_set, RngStream& stream) {
                return std::unique_ptr<Predictor>(new NetPredictor(
                    train_bayesnn(train_set, config, stream).regressor));
            }};
}

ModelBuilder make_nb_builder(const NbFitOptions& options) {
    return {"nb", [options](const Dataset& train_set, RngStream&) {
                return std::unique_ptr<Predictor>(
                    new NbPredictor(fit_nb(train_set.features, train_set.targets, options)));
            }};
}

ModelBuilder make_kr_builder(const BandwidthRule& rule) {
    return {"kr", [rule](const Dataset& train_set, RngStream&) {
                return std::unique_ptr<Predictor>(
                    new KrPredictor(fit_kr(train_set.features, train_set.targets, rule)));
            }};
}

ModelBuilder make_builder(const std::string& name, const NetPipelineConfig& config) {
    if (name == "regdbn") return make_regdbn_builder(config);
    if (name == "bayesnn") return make_bayesnn_builder(config);
    if (name == "nb") return make_nb_builder();
    if (name == "kr") return make_kr_builder();
    throw InvalidInputError("unknown model '" + name +
                            "' (expected regdbn, bayesnn, nb or kr)");
}

} // namespace regdbn
