#pragma once

#include "regdbn/finetune.hpp"
#include "regdbn/matrix.hpp"

namespace regdbn {

// Negative binomial regression, NB2 parameterization: mean mu = exp(x'beta),
// variance mu + mu^2 / dispersion, log link.
struct NbModel {
    VectorD coefficients; // intercept first, then one slope per feature
    double dispersion = 1.0;

    std::size_t n_features() const { return coefficients.size() - 1; }
};

struct NbFitOptions {
    std::size_t max_iterations = 500;
    double loglik_tolerance = 1e-8;
};

// Maximum-likelihood fit by alternating Newton steps on the coefficients
// (expected information) and on log(dispersion), with step halving whenever
// a step would lower the log-likelihood.
NbModel fit_nb(const Matrix& features, const VectorD& counts,
               const NbFitOptions& options = {});

double predict_nb(const NbModel& model, const VectorD& x);

// NB2 log-likelihood of the data under the model (sum over rows).
double nb_loglik(const NbModel& model, const Matrix& features, const VectorD& counts);

// Nadaraya-Watson regression with a Gaussian product kernel.
struct KernelModel {
    Matrix train_features;
    VectorD train_targets;
    VectorD bandwidth; // one per feature, strictly positive
    double target_mean = 0.0;
};

struct BandwidthRule {
    enum class Kind { Silverman, Loocv, Fixed } kind = Kind::Silverman;
    double fixed_h = 1.0;

    static BandwidthRule silverman() { return {Kind::Silverman, 0.0}; }
    static BandwidthRule loocv() { return {Kind::Loocv, 0.0}; }
    static BandwidthRule fixed(double h) { return {Kind::Fixed, h}; }
};

KernelModel fit_kr(const Matrix& features, const VectorD& targets,
                   const BandwidthRule& rule = BandwidthRule::silverman());

struct KrPrediction {
    double value = 0.0;
    bool extrapolated = false; // every kernel weight underflowed to zero
};

KrPrediction predict_kr_detail(const KernelModel& model, const VectorD& x);
double predict_kr(const KernelModel& model, const VectorD& x);

// The Bayesian NN baseline: a net with the same layer structure as the
// regularized DBN, randomly initialized instead of pretrained, trained by
// the shared fine-tuning code path. Targets are expected in normalized
// units, as for train().
FeedforwardNet train_bayesian_nn(const Matrix& features, const VectorD& targets,
                                 const std::vector<std::size_t>& layer_sizes,
                                 const ActivationParams& act,
                                 const FineTuneConfig& config, RngStream& stream);

// digamma / trigamma, needed by the dispersion Newton step
double digamma(double x);
double trigamma(double x);

} // namespace regdbn
