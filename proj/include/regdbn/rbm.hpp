#pragma once

#include <cstdint>
#include <optional>

#include "regdbn/matrix.hpp"
#include "regdbn/rng.hpp"

namespace regdbn {

// Transfer function phi(x) = theta_low + (theta_high - theta_low) *
// logistic(noise_control * x). With sigma = 0, theta_low = 0,
// theta_high = 1, noise_control = 1 it reduces to the plain logistic.
struct ActivationParams {
    double theta_low = 0.0;
    double theta_high = 1.0;
    double sigma = 0.2;         // noise constant on the pre-activation
    double noise_control = 1.0; // slope of the sigmoid

    void validate() const {
        if (!(theta_low < theta_high))
            throw InvalidInputError("ActivationParams: theta_low must be < theta_high");
        if (!(sigma >= 0.0))
            throw InvalidInputError("ActivationParams: sigma must be >= 0");
        if (!(noise_control > 0.0))
            throw InvalidInputError("ActivationParams: noise_control must be > 0");
    }

    double apply(double x) const {
        return theta_low +
               (theta_high - theta_low) / (1.0 + std::exp(-noise_control * x));
    }
};

enum class RbmMode { Binary, Continuous };

// One restricted Boltzmann machine: full bipartite connectivity between a
// visible and a hidden layer, no intra-layer edges. Binary mode follows the
// classic Bernoulli formulation; Continuous mode keeps the sigmoid but skips
// discretization and adds Gaussian pre-activation noise.
//
// Immutable during inference; training mutates a private copy owned by one
// worker.
struct ContinuousRbm {
    Matrix weights;       // n_visible x n_hidden
    VectorD visible_bias; // length n_visible
    VectorD hidden_bias;  // length n_hidden
    ActivationParams activation;
    RbmMode mode = RbmMode::Continuous;

    std::size_t n_visible() const { return weights.rows; }
    std::size_t n_hidden() const { return weights.cols; }

    // p(h_j = 1) = logistic(b_j + sum_i v_i w_ij). Binary mode only.
    VectorD hidden_prob(const VectorD& v) const;
    // p(v_i = 1) = logistic(c_i + sum_j h_j w_ij). Binary mode only.
    VectorD visible_prob(const VectorD& h) const;

    // s_j = phi(b_j + sum_i w_ij s_i + sigma * N(0,1)). Continuous mode only.
    // Null stream means noise off (deterministic mean-field pass).
    VectorD hidden_activation(const VectorD& v, RngStream* stream) const;
    VectorD visible_activation(const VectorD& h, RngStream* stream) const;

    void validate() const;
};

// Gaussian(0, 0.01) weights, zero biases.
ContinuousRbm make_rbm(std::size_t n_visible, std::size_t n_hidden,
                       RbmMode mode, const ActivationParams& act,
                       RngStream& stream, double weight_std = 0.01);

// States of the one-step Gibbs chain entering the update statistics:
// h0 from v0, v1 from h0, h1 from v1. Row r of each matrix belongs to
// batch row r.
struct Cd1Chain {
    Matrix h0;
    Matrix v1;
    Matrix h1;
};

struct Cd1Options {
    // Binarize hidden states during the continuous chain: unit state drawn
    // from {0,1} with P(1) = (s - theta_low) / (theta_high - theta_low).
    // Off by default; the continuous chain is the primary path.
    bool binarize_hidden = false;
};

struct Cd1Stats {
    double recon_error = 0.0; // pre-update reconstruction error of the batch
};

// Run the one-step chain for every row of the batch.
//
// Binary mode: h0 holds p(h|v0) (the propagated state is a Bernoulli draw
// from it), v1 a Bernoulli draw from p(v|h0_draw), h1 = p(h|v1). Using
// probabilities for the statistics ends the chain without extra sampling
// noise. Continuous mode: each step is the noisy activation of the previous
// state.
Cd1Chain sample_cd1_chain(const ContinuousRbm& rbm, const Matrix& batch,
                          RngStream& stream, const Cd1Options& opts = {});

// Apply the contrastive-divergence increment for given chain states:
//   dW = lr * (<v0 h0> - <v1 h1>),  db = lr * (<h0> - <h1>),
//   dc = lr * (<v0> - <v1>),
// averages taken over batch rows. Exposed separately so tests can stub the
// chain.
void cd1_apply(ContinuousRbm& rbm, const Matrix& batch, const Cd1Chain& chain,
               double learning_rate);

// One CD-1 parameter update over the batch; returns the pre-update
// reconstruction error.
Cd1Stats cd1_update(ContinuousRbm& rbm, const Matrix& batch,
                    double learning_rate, RngStream& stream,
                    const Cd1Options& opts = {});

// Mean squared difference between batch rows and their deterministic
// (noise-off) one-step reconstruction, averaged over all entries.
double reconstruction_error(const ContinuousRbm& rbm, const Matrix& batch);

struct RbmGradient {
    Matrix d_weights;
    VectorD d_visible_bias;
    VectorD d_hidden_bias;
};

// Mean log-likelihood of the batch under the Binary-mode Boltzmann
// distribution, by full enumeration of hidden states. Oracle-sized models
// only (n_visible + n_hidden <= 12).
double exact_loglik(const ContinuousRbm& rbm, const Matrix& batch);

// Exact gradient of the mean log-likelihood:
// d/dw_ij = <v_i h_j>_data - <v_i h_j>_model, by full enumeration.
RbmGradient exact_loglik_gradient(const ContinuousRbm& rbm, const Matrix& batch);

} // namespace regdbn
