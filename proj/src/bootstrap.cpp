#include "regdbn/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>

#include "regdbn/metrics.hpp"

namespace regdbn {

namespace {

std::uint64_t mix_bits(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t double_bits(double v) {
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof(b));
    return b;
}

std::string fraction_label(double f) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", f);
    return buf;
}

std::string fraction_percent(double f) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g%%", f * 100.0);
    return buf;
}

} // namespace

std::uint64_t subset_fingerprint(const Dataset& subset) {
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < subset.n_rows(); ++r) {
        std::uint64_t h = 0x9E3779B97F4A7C15ULL;
        for (std::size_t j = 0; j < subset.n_features(); ++j)
            h = mix_bits(h ^ double_bits(subset.features.at(r, j)));
        h = mix_bits(h ^ double_bits(subset.targets[r]));
        acc ^= h; // XOR keeps the hash order-insensitive
    }
    return acc;
}

BootstrapReport bootstrap_experiment(const std::vector<ModelBuilder>& models,
                                     const Dataset& train, const Dataset& test,
                                     const VectorD& fractions, std::size_t reps,
                                     std::uint64_t seed,
                                     const BootstrapOptions& options) {
    if (models.empty()) throw InvalidInputError("bootstrap_experiment: no models");
    if (reps < 1) throw InvalidInputError("bootstrap_experiment: reps >= 1");
    if (fractions.empty())
        throw InvalidInputError("bootstrap_experiment: no fractions");
    for (double f : fractions)
        if (!(f > 0.0 && f <= 1.0))
            throw InvalidInputError("bootstrap_experiment: fractions must lie in (0, 1]");
    train.validate();
    test.validate();

    BootstrapReport report;
    for (const ModelBuilder& m : models) report.model_names.push_back(m.name);
    report.fractions = fractions;
    report.reps = reps;
    report.seed = seed;

    const std::size_t n_models = models.size();
    const std::size_t n_fracs = fractions.size();
    report.details.resize(n_fracs * reps * n_models);

    const RngStream root(seed);
    const Matrix& test_x = test.features;
    const VectorD& test_y = test.targets;

    const auto run_task = [&](std::size_t task) {
        const std::size_t fi = task / reps;
        const std::size_t r = task % reps;
        const double f = fractions[fi];
        const std::string base =
            "f=" + fraction_label(f) + "/r=" + std::to_string(r + 1);

        RngStream subset_stream = root.child("subset/" + base);
        const Dataset subset = subsample(train, f, subset_stream);
        const std::uint64_t fp = subset_fingerprint(subset);

        for (std::size_t m = 0; m < n_models; ++m) {
            RepRecord rec;
            rec.model = m;
            rec.fraction = fi;
            rec.rep = r + 1;
            if (subset_fingerprint(subset) != fp)
                throw Error("internal", "bootstrap_experiment: paired subset changed "
                                        "between model fits");
            try {
                RngStream fit_stream = root.child("fit/" + base + "/m=" + models[m].name);
                const std::unique_ptr<Predictor> fitted =
                    models[m].build(subset, fit_stream);
                const VectorD pred = fitted->predict_batch(test_x);
                rec.mae = mae(pred, test_y);
                rec.rmse = rmse(pred, test_y);
                if (rec.mae > rec.rmse + 1e-9)
                    throw Error("internal", "bootstrap_experiment: MAE exceeded RMSE");
            } catch (const Error& e) {
                if (e.category() == "internal") throw;
                rec.failed = true;
                rec.error = e.what();
            } catch (const std::exception& e) {
                rec.failed = true;
                rec.error = e.what();
            }
            report.details[(fi * reps + r) * n_models + m] = std::move(rec);
        }
    };

    const std::size_t n_tasks = n_fracs * reps;
    const std::size_t workers = std::max<std::size_t>(1, options.workers);
    if (workers == 1) {
        for (std::size_t t = 0; t < n_tasks; ++t) run_task(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(workers, n_tasks); ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t t = next.fetch_add(1);
                    if (t >= n_tasks) return;
                    try {
                        run_task(t);
                    } catch (...) {
                        std::scoped_lock lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        next.store(n_tasks);
                        return;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    report.cells.assign(n_models, std::vector<BootstrapCell>(n_fracs));
    for (std::size_t m = 0; m < n_models; ++m) {
        for (std::size_t fi = 0; fi < n_fracs; ++fi) {
            BootstrapCell& cell = report.cells[m][fi];
            double mae_sum = 0.0, rmse_sum = 0.0;
            for (std::size_t r = 0; r < reps; ++r) {
                const RepRecord& rec = report.details[(fi * reps + r) * n_models + m];
                if (rec.failed) {
                    ++cell.reps_failed;
                    continue;
                }
                if (cell.reps_done == 0) {
                    cell.mae_min = cell.mae_max = rec.mae;
                    cell.rmse_min = cell.rmse_max = rec.rmse;
                } else {
                    cell.mae_min = std::min(cell.mae_min, rec.mae);
                    cell.mae_max = std::max(cell.mae_max, rec.mae);
                    cell.rmse_min = std::min(cell.rmse_min, rec.rmse);
                    cell.rmse_max = std::max(cell.rmse_max, rec.rmse);
                }
                mae_sum += rec.mae;
                rmse_sum += rec.rmse;
                ++cell.reps_done;
            }
            if (cell.reps_failed * 2 > reps)
                throw Error("experiment",
                            "bootstrap_experiment: model " + report.model_names[m] +
                                " failed " + std::to_string(cell.reps_failed) + "/" +
                                std::to_string(reps) + " repetitions at fraction " +
                                fraction_percent(fractions[fi]));
            if (cell.reps_done > 0) {
                cell.mae_avg = mae_sum / static_cast<double>(cell.reps_done);
                cell.rmse_avg = rmse_sum / static_cast<double>(cell.reps_done);
            }
        }
    }
    return report;
}

std::string report_to_csv(const BootstrapReport& report) {
    std::string out = "model,fraction,mae_min,mae_max,mae_avg,rmse_min,rmse_max,rmse_avg\n";
    char buf[320];
    for (std::size_t m = 0; m < report.model_names.size(); ++m) {
        for (std::size_t fi = 0; fi < report.fractions.size(); ++fi) {
            const BootstrapCell& c = report.cells[m][fi];
            std::snprintf(buf, sizeof(buf),
                          "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          report.model_names[m].c_str(),
                          fraction_percent(report.fractions[fi]).c_str(), c.mae_min,
                          c.mae_max, c.mae_avg, c.rmse_min, c.rmse_max, c.rmse_avg);
            out += buf;
        }
    }
    return out;
}

std::string detail_to_csv(const BootstrapReport& report) {
    std::string out = "model,fraction,rep,mae,rmse\n";
    char buf[200];
    const std::size_t n_models = report.model_names.size();
    for (std::size_t m = 0; m < n_models; ++m) {
        for (std::size_t fi = 0; fi < report.fractions.size(); ++fi) {
            for (std::size_t r = 0; r < report.reps; ++r) {
                const RepRecord& rec =
                    report.details[(fi * report.reps + r) * n_models + m];
                if (rec.failed) continue;
                std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%.17g,%.17g\n",
                              report.model_names[m].c_str(),
                              fraction_percent(report.fractions[fi]).c_str(), rec.rep,
                              rec.mae, rec.rmse);
                out += buf;
            }
        }
    }
    return out;
}

} // namespace regdbn
