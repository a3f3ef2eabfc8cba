#pragma once

#include <functional>
#include <memory>
#include <string>

#include "regdbn/data.hpp"

namespace regdbn {

struct Predictor {
    virtual ~Predictor() = default;
    virtual double predict(const VectorD& x) const = 0;

    VectorD predict_batch(const Matrix& features) const {
        VectorD out(features.rows, 0.0);
        for (std::size_t r = 0; r < features.rows; ++r) out[r] = predict(features.row(r));
        return out;
    }
};

// A named factory that trains a fresh model from a training subset. The
// stream is the repetition's child stream; builders must draw all their
// randomness from it.
struct ModelBuilder {
    std::string name;
    std::function<std::unique_ptr<Predictor>(const Dataset& train, RngStream& stream)> build;
};

// One (model, fraction) aggregate over repetitions.
struct BootstrapCell {
    double mae_min = 0.0, mae_max = 0.0, mae_avg = 0.0;
    double rmse_min = 0.0, rmse_max = 0.0, rmse_avg = 0.0;
    std::size_t reps_done = 0;
    std::size_t reps_failed = 0;
};

struct RepRecord {
    std::size_t model = 0;    // index into model_names
    std::size_t fraction = 0; // index into fractions
    std::size_t rep = 0;      // 1-based
    double mae = 0.0;
    double rmse = 0.0;
    bool failed = false;
    std::string error;
};

struct BootstrapReport {
    std::vector<std::string> model_names;
    VectorD fractions; // in (0, 1]
    std::size_t reps = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<BootstrapCell>> cells; // [model][fraction]
    std::vector<RepRecord> details;                // ordered (fraction, rep, model)

    const BootstrapCell& cell(std::size_t model, std::size_t fraction) const {
        return cells.at(model).at(fraction);
    }
};

struct BootstrapOptions {
    std::size_t workers = 1; // concurrent repetitions; results are schedule-independent
};

// The resampling protocol: per fraction and repetition draw one subset of
// the training set (all models see the same rows), fit every model from
// scratch, evaluate MAE and RMSE on the fixed test set in original target
// units, then aggregate min/avg/max over repetitions. Subset and fit
// randomness comes from child streams keyed by (seed, fraction, rep), so a
// report is fully determined by its inputs.
//
// A failed fit marks that repetition for that model and the run continues;
// more than half failures for any (model, fraction) aborts the experiment.
BootstrapReport bootstrap_experiment(const std::vector<ModelBuilder>& models,
                                     const Dataset& train, const Dataset& test,
                                     const VectorD& fractions, std::size_t reps,
                                     std::uint64_t seed,
                                     const BootstrapOptions& options = {});

// model,fraction,mae_min,mae_max,mae_avg,rmse_min,rmse_max,rmse_avg
// with the fraction formatted as a percent.
std::string report_to_csv(const BootstrapReport& report);

// model,fraction,rep,mae,rmse for every successful repetition.
std::string detail_to_csv(const BootstrapReport& report);

// Order-insensitive hash of the rows a subset contains; used to assert the
// paired-subset guarantee.
std::uint64_t subset_fingerprint(const Dataset& subset);

} // namespace regdbn
