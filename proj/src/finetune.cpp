#include "regdbn/finetune.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace regdbn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_data(const FeedforwardNet& net, const Matrix& features,
                const VectorD& targets, const char* who) {
    if (features.rows == 0) throw InvalidInputError(std::string(who) + ": empty data");
    if (features.rows != targets.size())
        throw DimensionError(std::string(who) + ": feature/target row mismatch");
    if (features.cols != net.input_width())
        throw DimensionError(std::string(who) + ": feature width mismatch");
}

// derivative of the transfer function in terms of its output s
double act_deriv(const ActivationParams& a, double s) {
    const double span = a.theta_high - a.theta_low;
    const double u = (s - a.theta_low) / span;
    return span * a.noise_control * u * (1.0 - u);
}

// Hidden activations per layer; acts[0] is the input, acts[L] the last
// hidden output.
double forward_store(const FeedforwardNet& net, const VectorD& x,
                     std::vector<VectorD>& acts) {
    acts.clear();
    acts.push_back(x);
    for (const DenseLayer& layer : net.hidden) {
        VectorD pre = matvec_t(layer.weights, acts.back());
        for (std::size_t j = 0; j < pre.size(); ++j)
            pre[j] = net.activation.apply(pre[j] + layer.bias[j]);
        acts.push_back(std::move(pre));
    }
    return dot(net.output_weights, acts.back()) + net.output_bias;
}

// Flat offsets matching FeedforwardNet::to_parameters.
struct ParamLayout {
    struct LayerSpan {
        std::size_t w_off, rows, cols, b_off;
    };
    std::vector<LayerSpan> layers;
    std::size_t out_w_off = 0, out_w_len = 0, out_b_off = 0, total = 0;

    explicit ParamLayout(const FeedforwardNet& net) {
        std::size_t k = 0;
        for (const DenseLayer& l : net.hidden) {
            layers.push_back({k, l.weights.rows, l.weights.cols,
                              k + l.weights.data.size()});
            k += l.weights.data.size() + l.bias.size();
        }
        out_w_off = k;
        out_w_len = net.output_weights.size();
        out_b_off = k + out_w_len;
        total = out_b_off + 1;
    }
};

// Accumulate seed * d(prediction)/d(theta) into g (flat, full layout).
void backprop_into(const FeedforwardNet& net, const ParamLayout& layout,
                   const std::vector<VectorD>& acts, double seed, VectorD& g) {
    const VectorD& last = acts.back();
    for (std::size_t j = 0; j < last.size(); ++j)
        g[layout.out_w_off + j] += seed * last[j];
    g[layout.out_b_off] += seed;

    VectorD delta(last.size());
    for (std::size_t j = 0; j < last.size(); ++j)
        delta[j] = seed * net.output_weights[j] * act_deriv(net.activation, last[j]);

    for (std::size_t li = net.hidden.size(); li-- > 0;) {
        const DenseLayer& layer = net.hidden[li];
        const VectorD& in = acts[li];
        const ParamLayout::LayerSpan& span = layout.layers[li];
        for (std::size_t i = 0; i < span.rows; ++i) {
            const double si = in[i];
            double* grow = g.data() + span.w_off + i * span.cols;
            for (std::size_t j = 0; j < span.cols; ++j) grow[j] += si * delta[j];
        }
        for (std::size_t j = 0; j < span.cols; ++j) g[span.b_off + j] += delta[j];
        if (li == 0) break;
        VectorD prev(span.rows, 0.0);
        for (std::size_t i = 0; i < span.rows; ++i) {
            const double* wrow = layer.weights.row_ptr(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < span.cols; ++j) acc += wrow[j] * delta[j];
            prev[i] = acc * act_deriv(net.activation, acts[li][i]);
        }
        delta = std::move(prev);
    }
}

VectorD mse_gradient(const FeedforwardNet& net, const ParamLayout& layout,
                     const Matrix& features, const VectorD& targets) {
    VectorD g(layout.total, 0.0);
    std::vector<VectorD> acts;
    const double scale = 2.0 / static_cast<double>(features.rows);
    for (std::size_t r = 0; r < features.rows; ++r) {
        const double y = forward_store(net, features.row(r), acts);
        backprop_into(net, layout, acts, scale * (y - targets[r]), g);
    }
    return g;
}

// (2 / weight_count) * w at weight positions, zero at biases.
VectorD weight_penalty_gradient(const FeedforwardNet& net, const ParamLayout& layout) {
    VectorD g(layout.total, 0.0);
    const VectorD p = net.to_parameters();
    const double scale = 2.0 / static_cast<double>(net.weight_count());
    for (const auto& span : layout.layers)
        for (std::size_t k = span.w_off; k < span.w_off + span.rows * span.cols; ++k)
            g[k] = scale * p[k];
    for (std::size_t k = layout.out_w_off; k < layout.out_w_off + layout.out_w_len; ++k)
        g[k] = scale * p[k];
    return g;
}

double sum_squared_weights(const FeedforwardNet& net) {
    double s = 0.0;
    for (const DenseLayer& l : net.hidden)
        for (double w : l.weights.data) s += w * w;
    for (double w : net.output_weights) s += w * w;
    return s;
}

} // namespace

ObjectiveParts objective(const FeedforwardNet& net, const Matrix& features,
                         const VectorD& targets, double alpha, double beta) {
    check_data(net, features, targets, "objective");
    ObjectiveParts parts;
    double sse = 0.0;
    for (std::size_t r = 0; r < features.rows; ++r) {
        const double e = net.forward(features.row(r)) - targets[r];
        sse += e * e;
    }
    parts.p = sse / static_cast<double>(features.rows);
    parts.e_w = sum_squared_weights(net) / static_cast<double>(net.weight_count());
    parts.f_w = alpha * parts.p + beta * parts.e_w;
    return parts;
}

VectorD objective_gradient(const FeedforwardNet& net, const Matrix& features,
                           const VectorD& targets, double alpha, double beta) {
    check_data(net, features, targets, "objective_gradient");
    const ParamLayout layout(net);
    const VectorD gp = mse_gradient(net, layout, features, targets);
    const VectorD ge = weight_penalty_gradient(net, layout);
    VectorD g(layout.total);
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = alpha * gp[k] + beta * ge[k];
    if (!all_finite(g)) throw DivergenceError("objective_gradient: non-finite gradient");
    return g;
}

HyperParams reestimate_hyperparams(const FeedforwardNet& net, const Matrix& features,
                                   const VectorD& targets, double alpha, double beta) {
    check_data(net, features, targets, "reestimate_hyperparams");
    const double n = static_cast<double>(features.rows);
    const double n_w = static_cast<double>(net.weight_count());
    const double a_w = beta / n_w;  // sum-convention weight-penalty coefficient
    const double b_d = alpha / n;   // sum-convention error coefficient

    HyperParams out{alpha, beta, kNaN, true};

    // weight-block Jacobian of predictions
    const ParamLayout layout(net);
    const std::size_t nw = net.weight_count();
    std::vector<std::size_t> weight_pos;
    weight_pos.reserve(nw);
    for (const auto& span : layout.layers)
        for (std::size_t k = span.w_off; k < span.w_off + span.rows * span.cols; ++k)
            weight_pos.push_back(k);
    for (std::size_t k = layout.out_w_off; k < layout.out_w_off + layout.out_w_len; ++k)
        weight_pos.push_back(k);

    Matrix h(nw, nw);
    double sse = 0.0;
    {
        std::vector<VectorD> acts;
        VectorD full(layout.total, 0.0), jrow(nw, 0.0);
        for (std::size_t r = 0; r < features.rows; ++r) {
            const double y = forward_store(net, features.row(r), acts);
            const double e = y - targets[r];
            sse += e * e;
            std::fill(full.begin(), full.end(), 0.0);
            backprop_into(net, layout, acts, 1.0, full);
            for (std::size_t k = 0; k < nw; ++k) jrow[k] = full[weight_pos[k]];
            add_outer(h, jrow, jrow, 2.0 * b_d);
        }
    }
    for (std::size_t k = 0; k < nw; ++k) h.at(k, k) += 2.0 * a_w;

    double trace = 0.0;
    if (!spd_inverse_trace(h, trace) || !std::isfinite(trace)) return out;

    double gamma = n_w - 2.0 * a_w * trace;
    gamma = std::clamp(gamma, 0.0, n_w);

    const double ssw = std::max(sum_squared_weights(net), 1e-300);
    const double sse_safe = std::max(sse, 1e-300);
    const double a_w_new = gamma / (2.0 * ssw);
    const double b_d_new = (n - gamma) / (2.0 * sse_safe);
    if (!std::isfinite(a_w_new) || !std::isfinite(b_d_new)) return out;

    out.alpha = std::clamp(n * b_d_new, 1e-12, 1e12);
    out.beta = std::clamp(n_w * a_w_new, 1e-12, 1e12);
    out.gamma = gamma;
    out.fallback = false;
    return out;
}

namespace {

std::vector<TrainerState> run_gd(FeedforwardNet& net, const Matrix& features,
                                 const VectorD& targets, double alpha, double beta,
                                 double learning_rate, std::size_t epochs,
                                 bool regularized, bool reestimate,
                                 std::size_t interval) {
    const ParamLayout layout(net);
    VectorD params = net.to_parameters();
    std::vector<TrainerState> history;
    history.reserve(epochs);
    double gamma = kNaN;
    bool fallback = false;

    for (std::size_t epoch = 1; epoch <= epochs; ++epoch) {
        if (reestimate && epoch % interval == 0) {
            const HyperParams hp =
                reestimate_hyperparams(net, features, targets, alpha, beta);
            alpha = hp.alpha;
            beta = hp.beta;
            gamma = hp.gamma;
            fallback = hp.fallback;
        }

        const ObjectiveParts parts = objective(net, features, targets, alpha, beta);
        if (!std::isfinite(parts.f_w))
            throw DivergenceError("train: non-finite objective at epoch " +
                                  std::to_string(epoch) + " (learning rate " +
                                  std::to_string(learning_rate) + ")");
        history.push_back({epoch, parts.f_w, parts.p, parts.e_w, alpha, beta, gamma,
                           fallback});

        VectorD g;
        if (regularized) {
            g = objective_gradient(net, features, targets, alpha, beta);
        } else {
            g = mse_gradient(net, layout, features, targets);
        }
        for (std::size_t k = 0; k < params.size(); ++k)
            params[k] -= learning_rate * g[k];
        if (!all_finite(params))
            throw DivergenceError("train: non-finite parameters at epoch " +
                                  std::to_string(epoch) + " (learning rate " +
                                  std::to_string(learning_rate) + ")");
        net.from_parameters(params);
    }
    return history;
}

} // namespace

std::vector<TrainerState> train(FeedforwardNet& net, const Matrix& features,
                                const VectorD& targets, const FineTuneConfig& config) {
    config.validate();
    check_data(net, features, targets, "train");
    return run_gd(net, features, targets, config.alpha, config.beta,
                  config.learning_rate, config.epochs, true, config.reestimate,
                  config.reestimate_interval);
}

std::vector<TrainerState> train_mse(FeedforwardNet& net, const Matrix& features,
                                    const VectorD& targets, double learning_rate,
                                    std::size_t epochs) {
    check_data(net, features, targets, "train_mse");
    if (!(learning_rate > 0.0))
        throw InvalidInputError("train_mse: learning_rate must be > 0");
    return run_gd(net, features, targets, 1.0, 0.0, learning_rate, epochs, false,
                  false, 1);
}

std::string history_to_csv(const std::vector<TrainerState>& history) {
    std::string out = "epoch,f_w,p,e_w,alpha,beta\n";
    char buf[256];
    for (const TrainerState& s : history) {
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      s.epoch, s.f_w, s.p, s.e_w, s.alpha, s.beta);
        out += buf;
    }
    return out;
}

} // namespace regdbn
