#include "regdbn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace regdbn {

double digamma(double x) {
    if (!(x > 0.0)) throw InvalidInputError("digamma: x must be > 0");
    double acc = 0.0;
    while (x < 6.0) { // shift into the asymptotic range
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
                   inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
}

double trigamma(double x) {
    if (!(x > 0.0)) throw InvalidInputError("trigamma: x must be > 0");
    double acc = 0.0;
    while (x < 6.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    return acc + inv * (1.0 + inv * (0.5 + inv * (1.0 / 6.0 - inv2 * (1.0 / 30.0 -
                  inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0))))));
}

namespace {

constexpr double kMinDispersion = 1e-6;
constexpr double kMaxDispersion = 1e9;

double nb_row_loglik(double y, double mu, double k) {
    return std::lgamma(y + k) - std::lgamma(k) - std::lgamma(y + 1.0) +
           k * std::log(k) + (y > 0.0 ? y * std::log(mu) : 0.0) -
           (y + k) * std::log(mu + k);
}

VectorD linear_predictor(const Matrix& x, const VectorD& beta) {
    VectorD eta(x.rows, beta[0]);
    for (std::size_t r = 0; r < x.rows; ++r) {
        const double* row = x.row_ptr(r);
        double acc = beta[0];
        for (std::size_t j = 0; j < x.cols; ++j) acc += row[j] * beta[j + 1];
        eta[r] = acc;
    }
    return eta;
}

double loglik_at(const Matrix& x, const VectorD& y, const VectorD& beta, double k) {
    const VectorD eta = linear_predictor(x, beta);
    double ll = 0.0;
    for (std::size_t r = 0; r < x.rows; ++r) {
        if (eta[r] > 300.0) return -1e300; // mean overflow, treat as rejected step
        ll += nb_row_loglik(y[r], std::exp(eta[r]), k);
    }
    return std::isfinite(ll) ? ll : -1e300;
}

void check_counts(const VectorD& counts) {
    for (double y : counts) {
        if (!std::isfinite(y) || y < 0.0 || y != std::floor(y))
            throw InvalidInputError("fit_nb: counts must be non-negative integers");
    }
}

void check_full_rank(const Matrix& x) {
    const std::size_t p = x.cols + 1;
    Matrix gram(p, p);
    for (std::size_t r = 0; r < x.rows; ++r) {
        VectorD row(p, 1.0);
        for (std::size_t j = 0; j < x.cols; ++j) row[j + 1] = x.at(r, j);
        add_outer(gram, row, row, 1.0);
    }
    VectorD probe(p, 1.0), sol;
    if (!cholesky_solve(gram, probe, sol))
        throw InvalidInputError("fit_nb: design matrix is rank deficient");
}

} // namespace

double nb_loglik(const NbModel& model, const Matrix& features, const VectorD& counts) {
    if (features.rows != counts.size())
        throw DimensionError("nb_loglik: row mismatch");
    if (features.cols + 1 != model.coefficients.size())
        throw DimensionError("nb_loglik: feature width mismatch");
    return loglik_at(features, counts, model.coefficients, model.dispersion);
}

NbModel fit_nb(const Matrix& features, const VectorD& counts,
               const NbFitOptions& options) {
    if (features.rows == 0) throw InvalidInputError("fit_nb: empty data");
    if (features.rows != counts.size())
        throw DimensionError("fit_nb: feature/count row mismatch");
    if (!features.all_finite())
        throw InvalidInputError("fit_nb: non-finite feature entry");
    check_counts(counts);
    check_full_rank(features);

    const std::size_t n = features.rows, p = features.cols + 1;

    double mean = 0.0;
    for (double y : counts) mean += y;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double y : counts) var += (y - mean) * (y - mean);
    var /= static_cast<double>(n > 1 ? n - 1 : 1);

    VectorD beta(p, 0.0);
    beta[0] = std::log(std::max(mean, 1e-8));
    // moment start for the dispersion; near-Poisson data start large
    double k = var > mean ? std::clamp(mean * mean / (var - mean), 1e-3, 1e6) : 100.0;

    double ll = loglik_at(features, counts, beta, k);

    for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
        const double ll_before = ll;

        // Newton step on beta with expected information
        VectorD eta = linear_predictor(features, beta);
        VectorD score(p, 0.0);
        Matrix info(p, p);
        VectorD xrow(p, 1.0);
        for (std::size_t r = 0; r < n; ++r) {
            const double mu = std::exp(std::min(eta[r], 300.0));
            const double w = mu * k / (mu + k);
            const double resid = (counts[r] - mu) * k / (mu + k);
            for (std::size_t j = 0; j < features.cols; ++j)
                xrow[j + 1] = features.at(r, j);
            axpy(score, xrow, resid);
            add_outer(info, xrow, xrow, w);
        }
        VectorD step;
        if (cholesky_solve(info, score, step)) {
            double scale = 1.0;
            for (int half = 0; half < 30; ++half) {
                VectorD cand = beta;
                axpy(cand, step, scale);
                const double cand_ll = loglik_at(features, counts, cand, k);
                if (cand_ll >= ll - 1e-12) {
                    beta = cand;
                    ll = cand_ll;
                    break;
                }
                scale *= 0.5;
            }
        }

        // Newton step on log(dispersion)
        eta = linear_predictor(features, beta);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double mu = std::exp(std::min(eta[r], 300.0));
            const double y = counts[r];
            d1 += digamma(y + k) - digamma(k) + std::log(k) + 1.0 -
                  std::log(mu + k) - (y + k) / (mu + k);
            d2 += trigamma(y + k) - trigamma(k) + 1.0 / k - 2.0 / (mu + k) +
                  (y + k) / ((mu + k) * (mu + k));
        }
        const double g_theta = k * d1;             // d loglik / d log k
        const double h_theta = k * k * d2 + k * d1; // d^2 loglik / d (log k)^2
        double dtheta = h_theta < 0.0 ? -g_theta / h_theta
                                      : (g_theta > 0.0 ? 0.5 : -0.5);
        dtheta = std::clamp(dtheta, -2.0, 2.0);
        double scale = 1.0;
        for (int half = 0; half < 30; ++half) {
            const double cand_k =
                std::clamp(k * std::exp(scale * dtheta), kMinDispersion, kMaxDispersion);
            const double cand_ll = loglik_at(features, counts, beta, cand_k);
            if (cand_ll >= ll - 1e-12) {
                k = cand_k;
                ll = cand_ll;
                break;
            }
            scale *= 0.5;
        }

        if (std::abs(ll - ll_before) < options.loglik_tolerance)
            return NbModel{beta, k};
    }
    throw ConvergenceError(
        "fit_nb: no convergence after " + std::to_string(options.max_iterations) +
        " iterations (last loglik " + std::to_string(ll) + ", dispersion " +
        std::to_string(k) + ")");
}

double predict_nb(const NbModel& model, const VectorD& x) {
    if (x.size() + 1 != model.coefficients.size())
        throw DimensionError("predict_nb: feature width mismatch");
    double eta = model.coefficients[0];
    for (std::size_t j = 0; j < x.size(); ++j) eta += model.coefficients[j + 1] * x[j];
    return std::exp(eta);
}

namespace {

VectorD silverman_bandwidth(const Matrix& x) {
    const double n = static_cast<double>(x.rows);
    const double d = static_cast<double>(x.cols);
    const double factor = std::pow(4.0 / ((d + 2.0) * n), 1.0 / (d + 4.0));
    VectorD h(x.cols, 1.0);
    for (std::size_t j = 0; j < x.cols; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) mean += x.at(r, j);
        mean /= n;
        double ss = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            const double dlt = x.at(r, j) - mean;
            ss += dlt * dlt;
        }
        const double sd = x.rows > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        h[j] = sd > 0.0 ? sd * factor : 1.0; // constant column: inert dimension
    }
    return h;
}

double squared_distance(const Matrix& x, std::size_t r, const VectorD& q,
                        const VectorD& h) {
    const double* row = x.row_ptr(r);
    double acc = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        const double u = (q[j] - row[j]) / h[j];
        acc += u * u;
    }
    return acc;
}

double loocv_mse(const Matrix& x, const VectorD& y, const VectorD& h) {
    double mse = 0.0;
    for (std::size_t i = 0; i < x.rows; ++i) {
        const VectorD q = x.row(i);
        double num = 0.0, den = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            if (r == i) continue;
            const double w = std::exp(-0.5 * squared_distance(x, r, q, h));
            num += w * y[r];
            den += w;
        }
        double pred;
        if (den > 0.0) {
            pred = num / den;
        } else {
            double mean = 0.0;
            for (std::size_t r = 0; r < x.rows; ++r)
                if (r != i) mean += y[r];
            pred = mean / static_cast<double>(x.rows - 1);
        }
        const double e = pred - y[i];
        mse += e * e;
    }
    return mse / static_cast<double>(x.rows);
}

} // namespace

KernelModel fit_kr(const Matrix& features, const VectorD& targets,
                   const BandwidthRule& rule) {
    if (features.rows == 0) throw InvalidInputError("fit_kr: empty training set");
    if (features.rows != targets.size())
        throw DimensionError("fit_kr: feature/target row mismatch");
    if (!features.all_finite() || !all_finite(targets))
        throw InvalidInputError("fit_kr: non-finite entry");

    KernelModel model;
    model.train_features = features;
    model.train_targets = targets;
    model.target_mean = 0.0;
    for (double y : targets) model.target_mean += y;
    model.target_mean /= static_cast<double>(targets.size());

    switch (rule.kind) {
    case BandwidthRule::Kind::Fixed:
        if (!(rule.fixed_h > 0.0))
            throw InvalidInputError("fit_kr: fixed bandwidth must be > 0");
        model.bandwidth.assign(features.cols, rule.fixed_h);
        break;
    case BandwidthRule::Kind::Silverman:
        model.bandwidth = silverman_bandwidth(features);
        break;
    case BandwidthRule::Kind::Loocv: {
        const VectorD base = silverman_bandwidth(features);
        const double multipliers[] = {0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
        double best_mse = 0.0;
        bool first = true;
        for (double m : multipliers) {
            VectorD h = base;
            for (double& v : h) v *= m;
            const double mse = features.rows > 1 ? loocv_mse(features, targets, h)
                                                 : 0.0;
            if (first || mse < best_mse) {
                best_mse = mse;
                model.bandwidth = h;
                first = false;
            }
        }
        break;
    }
    }
    return model;
}

KrPrediction predict_kr_detail(const KernelModel& model, const VectorD& x) {
    if (x.size() != model.train_features.cols)
        throw DimensionError("predict_kr: feature width mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t r = 0; r < model.train_features.rows; ++r) {
        const double w =
            std::exp(-0.5 * squared_distance(model.train_features, r, x, model.bandwidth));
        num += w * model.train_targets[r];
        den += w;
    }
    if (den == 0.0) return {model.target_mean, true};
    return {num / den, false};
}

double predict_kr(const KernelModel& model, const VectorD& x) {
    return predict_kr_detail(model, x).value;
}

FeedforwardNet train_bayesian_nn(const Matrix& features, const VectorD& targets,
                                 const std::vector<std::size_t>& layer_sizes,
                                 const ActivationParams& act,
                                 const FineTuneConfig& config, RngStream& stream) {
    if (layer_sizes.empty() || layer_sizes.front() != features.cols)
        throw DimensionError("train_bayesian_nn: layer_sizes[0] must match feature width");
    FeedforwardNet net = make_net(layer_sizes, act, stream);
    train(net, features, targets, config);
    return net;
}

} // namespace regdbn
