#pragma once

#include <string>
#include <vector>

#include "regdbn/net.hpp"

namespace regdbn {

// Decomposition of the regularized objective F_W = alpha * P + beta * E_W,
// with P the mean squared prediction error over the provided samples and
// E_W the mean of squared weights over all layers (biases excluded).
struct ObjectiveParts {
    double f_w = 0.0;
    double p = 0.0;
    double e_w = 0.0;
};

struct FineTuneConfig {
    double alpha = 1.0;  // error-term weight
    double beta = 0.01;  // weight-penalty weight
    double learning_rate = 0.5;
    std::size_t epochs = 1000;
    bool reestimate = false; // evidence-based alpha/beta updates
    std::size_t reestimate_interval = 10;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(alpha >= 0.0) || !(beta >= 0.0) || !(alpha + beta > 0.0))
            throw InvalidInputError("FineTuneConfig: need alpha, beta >= 0 and alpha + beta > 0");
        if (!(learning_rate > 0.0))
            throw InvalidInputError("FineTuneConfig: learning_rate must be > 0");
        if (epochs < 1) throw InvalidInputError("FineTuneConfig: epochs >= 1");
        if (reestimate_interval < 1)
            throw InvalidInputError("FineTuneConfig: reestimate_interval >= 1");
    }
};

// One history row per epoch, recorded before that epoch's parameter step.
// gamma is the effective parameter count, NaN unless re-estimation ran.
struct TrainerState {
    std::size_t epoch = 0;
    double f_w = 0.0;
    double p = 0.0;
    double e_w = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    bool reestimate_fallback = false;
};

ObjectiveParts objective(const FeedforwardNet& net, const Matrix& features,
                         const VectorD& targets, double alpha, double beta);

// Exact reverse-mode gradient of F_W, flat in net.to_parameters() order.
// The E_W contribution is (2 / weight_count) * w per weight, zero for biases.
VectorD objective_gradient(const FeedforwardNet& net, const Matrix& features,
                           const VectorD& targets, double alpha, double beta);

struct HyperParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    bool fallback = false; // singular Hessian: previous values kept
};

// Evidence-framework update of (alpha, beta) with a Gauss-Newton Hessian
// over the weight block. Internally the sum-of-squares convention is used
// (weight-penalty coefficient beta/weight_count, error coefficient
// alpha/sample_count); gamma = N_w - 2 a_w tr(H^-1) with
// H = 2 b_d J'J + 2 a_w I, then the updated coefficients are mapped back so
// that alpha keeps weighting the mean error term and beta the mean weight
// term.
HyperParams reestimate_hyperparams(const FeedforwardNet& net, const Matrix& features,
                                   const VectorD& targets, double alpha, double beta);

// Full-batch gradient descent on F_W; mutates the net in place. When
// config.reestimate is set, alpha and beta are refreshed every
// reestimate_interval epochs before that epoch's step.
std::vector<TrainerState> train(FeedforwardNet& net, const Matrix& features,
                                const VectorD& targets, const FineTuneConfig& config);

// Plain mean-squared-error gradient descent, no regularization term. With
// alpha = 1, beta = 0 the regularized trainer follows this one bit for bit.
std::vector<TrainerState> train_mse(FeedforwardNet& net, const Matrix& features,
                                    const VectorD& targets, double learning_rate,
                                    std::size_t epochs);

// CSV export, one row per epoch: epoch,f_w,p,e_w,alpha,beta
std::string history_to_csv(const std::vector<TrainerState>& history);

} // namespace regdbn
