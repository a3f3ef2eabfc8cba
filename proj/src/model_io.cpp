#include "regdbn/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace regdbn {

using nlohmann::json;

namespace {

json activation_to_json(const ActivationParams& a) {
    return {{"theta_low", a.theta_low},
            {"theta_high", a.theta_high},
            {"sigma", a.sigma},
            {"noise_control", a.noise_control}};
}

ActivationParams activation_from_json(const json& j) {
    ActivationParams a;
    a.theta_low = j.at("theta_low").get<double>();
    a.theta_high = j.at("theta_high").get<double>();
    a.sigma = j.at("sigma").get<double>();
    a.noise_control = j.at("noise_control").get<double>();
    a.validate();
    return a;
}

json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows}, {"cols", m.cols}, {"data", m.data}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data = j.at("data").get<std::vector<double>>();
    if (m.data.size() != m.rows * m.cols)
        throw SchemaError("model file: matrix data length mismatch");
    return m;
}

json scaler_to_json(const Scaler& s) {
    return {{"min", s.col_min}, {"max", s.col_max}};
}

Scaler scaler_from_json(const json& j) {
    Scaler s;
    s.col_min = j.at("min").get<std::vector<double>>();
    s.col_max = j.at("max").get<std::vector<double>>();
    if (s.col_min.size() != s.col_max.size())
        throw SchemaError("model file: scaler arrays length mismatch");
    return s;
}

json header(const char* kind) {
    return {{"format_version", kModelFormatVersion}, {"kind", kind}};
}

json parse_checked(const std::string& text, const char* kind) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("model file: malformed JSON");
    if (!j.contains("format_version") ||
        j.at("format_version").get<int>() != kModelFormatVersion)
        throw SchemaError("model file: unsupported format version");
    if (j.at("kind").get<std::string>() != kind)
        throw SchemaError("model file: expected kind '" + std::string(kind) +
                          "', found '" + j.at("kind").get<std::string>() + "'");
    return j;
}

} // namespace

std::string save_dbn(const DbnModel& dbn) {
    dbn.validate();
    json j = header("dbn");
    j["mode"] = dbn.layers.front().mode == RbmMode::Binary ? "binary" : "continuous";
    j["layers"] = json::array();
    for (const ContinuousRbm& rbm : dbn.layers) {
        j["layers"].push_back({{"weights", matrix_to_json(rbm.weights)},
                               {"visible_bias", rbm.visible_bias},
                               {"hidden_bias", rbm.hidden_bias},
                               {"activation", activation_to_json(rbm.activation)}});
    }
    return j.dump(2);
}

DbnModel load_dbn(const std::string& text) {
    const json j = parse_checked(text, "dbn");
    const RbmMode mode =
        j.at("mode").get<std::string>() == "binary" ? RbmMode::Binary
                                                    : RbmMode::Continuous;
    DbnModel dbn;
    for (const json& lj : j.at("layers")) {
        ContinuousRbm rbm;
        rbm.weights = matrix_from_json(lj.at("weights"));
        rbm.visible_bias = lj.at("visible_bias").get<std::vector<double>>();
        rbm.hidden_bias = lj.at("hidden_bias").get<std::vector<double>>();
        rbm.activation = activation_from_json(lj.at("activation"));
        rbm.mode = mode;
        dbn.layers.push_back(std::move(rbm));
    }
    dbn.validate();
    return dbn;
}

namespace {

json net_to_json(const FeedforwardNet& net) {
    json j;
    j["activation"] = activation_to_json(net.activation);
    j["hidden"] = json::array();
    for (const DenseLayer& l : net.hidden)
        j["hidden"].push_back(
            {{"weights", matrix_to_json(l.weights)}, {"bias", l.bias}});
    j["output_weights"] = net.output_weights;
    j["output_bias"] = net.output_bias;
    return j;
}

FeedforwardNet net_from_json(const json& j) {
    FeedforwardNet net;
    net.activation = activation_from_json(j.at("activation"));
    for (const json& lj : j.at("hidden")) {
        DenseLayer l;
        l.weights = matrix_from_json(lj.at("weights"));
        l.bias = lj.at("bias").get<std::vector<double>>();
        net.hidden.push_back(std::move(l));
    }
    net.output_weights = j.at("output_weights").get<std::vector<double>>();
    net.output_bias = j.at("output_bias").get<double>();
    net.validate();
    return net;
}

} // namespace

std::string save_net(const FeedforwardNet& net) {
    net.validate();
    json j = header("feedforward");
    j["net"] = net_to_json(net);
    return j.dump(2);
}

FeedforwardNet load_net(const std::string& text) {
    return net_from_json(parse_checked(text, "feedforward").at("net"));
}

std::string save_net_regressor(const NetRegressor& model) {
    model.net.validate();
    json j = header("net_regressor");
    j["model"] = model.model;
    j["net"] = net_to_json(model.net);
    j["feature_scaler"] = scaler_to_json(model.feature_scaler);
    j["target_scaler"] = scaler_to_json(model.target_scaler);
    j["feature_names"] = model.feature_names;
    return j.dump(2);
}

NetRegressor load_net_regressor(const std::string& text) {
    const json j = parse_checked(text, "net_regressor");
    NetRegressor model;
    model.model = j.at("model").get<std::string>();
    model.net = net_from_json(j.at("net"));
    model.feature_scaler = scaler_from_json(j.at("feature_scaler"));
    model.target_scaler = scaler_from_json(j.at("target_scaler"));
    model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    return model;
}

std::string save_nb(const NbModel& model) {
    json j = header("nb");
    j["coefficients"] = model.coefficients;
    j["dispersion"] = model.dispersion;
    return j.dump(2);
}

NbModel load_nb(const std::string& text) {
    const json j = parse_checked(text, "nb");
    NbModel model;
    model.coefficients = j.at("coefficients").get<std::vector<double>>();
    model.dispersion = j.at("dispersion").get<double>();
    if (model.coefficients.empty() || !(model.dispersion > 0.0))
        throw SchemaError("model file: invalid nb parameters");
    return model;
}

std::string save_kr(const KernelModel& model) {
    json j = header("kr");
    j["train_features"] = matrix_to_json(model.train_features);
    j["train_targets"] = model.train_targets;
    j["bandwidth"] = model.bandwidth;
    j["target_mean"] = model.target_mean;
    return j.dump(2);
}

KernelModel load_kr(const std::string& text) {
    const json j = parse_checked(text, "kr");
    KernelModel model;
    model.train_features = matrix_from_json(j.at("train_features"));
    model.train_targets = j.at("train_targets").get<std::vector<double>>();
    model.bandwidth = j.at("bandwidth").get<std::vector<double>>();
    model.target_mean = j.at("target_mean").get<double>();
    return model;
}

std::string model_kind(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("kind"))
        throw SchemaError("model file: malformed JSON");
    return j.at("kind").get<std::string>();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed for " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace regdbn
