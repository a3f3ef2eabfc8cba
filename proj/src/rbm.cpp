#include "regdbn/rbm.hpp"

#include <cmath>
#include <string>

namespace regdbn {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// log(1 + e^x) without overflow
double softplus(double x) {
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

void check_batch(const ContinuousRbm& rbm, const Matrix& batch, const char* who) {
    if (batch.rows == 0) throw InvalidInputError(std::string(who) + ": empty batch");
    if (batch.cols != rbm.n_visible())
        throw DimensionError(std::string(who) + ": batch width " +
                             std::to_string(batch.cols) + " != n_visible " +
                             std::to_string(rbm.n_visible()));
    for (double x : batch.data) {
        if (!std::isfinite(x))
            throw InvalidInputError(std::string(who) + ": non-finite batch entry");
        if (rbm.mode == RbmMode::Binary) {
            if (x != 0.0 && x != 1.0)
                throw InvalidInputError(std::string(who) +
                                        ": Binary mode needs entries in {0,1}");
        } else if (x < 0.0 || x > 1.0) {
            throw InvalidInputError(std::string(who) +
                                    ": Continuous mode needs entries in [0,1]");
        }
    }
}

} // namespace

void ContinuousRbm::validate() const {
    activation.validate();
    if (weights.rows == 0 || weights.cols == 0)
        throw InvalidInputError("ContinuousRbm: empty weight matrix");
    if (visible_bias.size() != weights.rows || hidden_bias.size() != weights.cols)
        throw DimensionError("ContinuousRbm: bias length inconsistent with weights");
    if (!weights.all_finite() || !all_finite(visible_bias) || !all_finite(hidden_bias))
        throw InvalidInputError("ContinuousRbm: non-finite parameter");
}

VectorD ContinuousRbm::hidden_prob(const VectorD& v) const {
    if (mode != RbmMode::Binary)
        throw InvalidInputError("hidden_prob: Binary mode only");
    if (v.size() != n_visible()) throw DimensionError("hidden_prob: length mismatch");
    VectorD p = matvec_t(weights, v);
    for (std::size_t j = 0; j < p.size(); ++j) p[j] = logistic(p[j] + hidden_bias[j]);
    return p;
}

VectorD ContinuousRbm::visible_prob(const VectorD& h) const {
    if (mode != RbmMode::Binary)
        throw InvalidInputError("visible_prob: Binary mode only");
    if (h.size() != n_hidden()) throw DimensionError("visible_prob: length mismatch");
    VectorD p = matvec(weights, h);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = logistic(p[i] + visible_bias[i]);
    return p;
}

VectorD ContinuousRbm::hidden_activation(const VectorD& v, RngStream* stream) const {
    if (mode != RbmMode::Continuous)
        throw InvalidInputError("hidden_activation: Continuous mode only");
    if (v.size() != n_visible())
        throw DimensionError("hidden_activation: length mismatch");
    VectorD s = matvec_t(weights, v);
    for (std::size_t j = 0; j < s.size(); ++j) {
        double pre = s[j] + hidden_bias[j];
        if (stream) pre += activation.sigma * stream->gaussian();
        s[j] = activation.apply(pre);
    }
    return s;
}

VectorD ContinuousRbm::visible_activation(const VectorD& h, RngStream* stream) const {
    if (mode != RbmMode::Continuous)
        throw InvalidInputError("visible_activation: Continuous mode only");
    if (h.size() != n_hidden())
        throw DimensionError("visible_activation: length mismatch");
    VectorD s = matvec(weights, h);
    for (std::size_t i = 0; i < s.size(); ++i) {
        double pre = s[i] + visible_bias[i];
        if (stream) pre += activation.sigma * stream->gaussian();
        s[i] = activation.apply(pre);
    }
    return s;
}

ContinuousRbm make_rbm(std::size_t n_visible, std::size_t n_hidden, RbmMode mode,
                       const ActivationParams& act, RngStream& stream,
                       double weight_std) {
    ContinuousRbm rbm;
    rbm.weights = Matrix(n_visible, n_hidden);
    for (double& w : rbm.weights.data) w = weight_std * stream.gaussian();
    rbm.visible_bias.assign(n_visible, 0.0);
    rbm.hidden_bias.assign(n_hidden, 0.0);
    rbm.activation = act;
    rbm.mode = mode;
    rbm.validate();
    return rbm;
}

Cd1Chain sample_cd1_chain(const ContinuousRbm& rbm, const Matrix& batch,
                          RngStream& stream, const Cd1Options& opts) {
    check_batch(rbm, batch, "sample_cd1_chain");
    const std::size_t n = batch.rows;
    Cd1Chain chain;
    chain.h0 = Matrix(n, rbm.n_hidden());
    chain.v1 = Matrix(n, rbm.n_visible());
    chain.h1 = Matrix(n, rbm.n_hidden());

    const auto binarize = [&](VectorD& s) {
        const double lo = rbm.activation.theta_low;
        const double span = rbm.activation.theta_high - lo;
        for (double& x : s) x = stream.next_uniform() < (x - lo) / span ? 1.0 : 0.0;
    };

    for (std::size_t r = 0; r < n; ++r) {
        const VectorD v0 = batch.row(r);
        if (rbm.mode == RbmMode::Binary) {
            VectorD h0p = rbm.hidden_prob(v0);
            VectorD h0s(h0p.size());
            for (std::size_t j = 0; j < h0p.size(); ++j)
                h0s[j] = stream.next_uniform() < h0p[j] ? 1.0 : 0.0;
            VectorD v1p = rbm.visible_prob(h0s);
            VectorD v1s(v1p.size());
            for (std::size_t i = 0; i < v1p.size(); ++i)
                v1s[i] = stream.next_uniform() < v1p[i] ? 1.0 : 0.0;
            VectorD h1p = rbm.hidden_prob(v1s);
            for (std::size_t j = 0; j < h0p.size(); ++j) chain.h0.at(r, j) = h0p[j];
            for (std::size_t i = 0; i < v1s.size(); ++i) chain.v1.at(r, i) = v1s[i];
            for (std::size_t j = 0; j < h1p.size(); ++j) chain.h1.at(r, j) = h1p[j];
        } else {
            VectorD h0 = rbm.hidden_activation(v0, &stream);
            if (opts.binarize_hidden) binarize(h0);
            VectorD v1 = rbm.visible_activation(h0, &stream);
            VectorD h1 = rbm.hidden_activation(v1, &stream);
            if (opts.binarize_hidden) binarize(h1);
            for (std::size_t j = 0; j < h0.size(); ++j) chain.h0.at(r, j) = h0[j];
            for (std::size_t i = 0; i < v1.size(); ++i) chain.v1.at(r, i) = v1[i];
            for (std::size_t j = 0; j < h1.size(); ++j) chain.h1.at(r, j) = h1[j];
        }
    }
    return chain;
}

void cd1_apply(ContinuousRbm& rbm, const Matrix& batch, const Cd1Chain& chain,
               double learning_rate) {
    if (batch.rows == 0) throw InvalidInputError("cd1_apply: empty batch");
    if (chain.h0.rows != batch.rows || chain.v1.rows != batch.rows ||
        chain.h1.rows != batch.rows)
        throw DimensionError("cd1_apply: chain/batch row mismatch");
    if (batch.cols != rbm.n_visible() || chain.v1.cols != rbm.n_visible() ||
        chain.h0.cols != rbm.n_hidden() || chain.h1.cols != rbm.n_hidden())
        throw DimensionError("cd1_apply: chain width mismatch");
    if (!(learning_rate > 0.0))
        throw InvalidInputError("cd1_apply: learning_rate must be > 0");

    const double scale = learning_rate / static_cast<double>(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        for (std::size_t i = 0; i < rbm.n_visible(); ++i) {
            const double v0 = batch.at(r, i), v1 = chain.v1.at(r, i);
            double* wrow = rbm.weights.row_ptr(i);
            for (std::size_t j = 0; j < rbm.n_hidden(); ++j)
                wrow[j] += scale * (v0 * chain.h0.at(r, j) - v1 * chain.h1.at(r, j));
        }
        for (std::size_t j = 0; j < rbm.n_hidden(); ++j)
            rbm.hidden_bias[j] += scale * (chain.h0.at(r, j) - chain.h1.at(r, j));
        for (std::size_t i = 0; i < rbm.n_visible(); ++i)
            rbm.visible_bias[i] += scale * (batch.at(r, i) - chain.v1.at(r, i));
    }
    if (!rbm.weights.all_finite() || !all_finite(rbm.visible_bias) ||
        !all_finite(rbm.hidden_bias))
        throw DivergenceError("cd1_apply: non-finite parameters after update");
}

Cd1Stats cd1_update(ContinuousRbm& rbm, const Matrix& batch, double learning_rate,
                    RngStream& stream, const Cd1Options& opts) {
    check_batch(rbm, batch, "cd1_update");
    Cd1Stats stats;
    stats.recon_error = reconstruction_error(rbm, batch);
    const Cd1Chain chain = sample_cd1_chain(rbm, batch, stream, opts);
    cd1_apply(rbm, batch, chain, learning_rate);
    return stats;
}

double reconstruction_error(const ContinuousRbm& rbm, const Matrix& batch) {
    check_batch(rbm, batch, "reconstruction_error");
    double sum = 0.0;
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const VectorD v0 = batch.row(r);
        VectorD v1;
        if (rbm.mode == RbmMode::Binary)
            v1 = rbm.visible_prob(rbm.hidden_prob(v0));
        else
            v1 = rbm.visible_activation(rbm.hidden_activation(v0, nullptr), nullptr);
        for (std::size_t i = 0; i < v0.size(); ++i) {
            const double d = v0[i] - v1[i];
            sum += d * d;
        }
    }
    return sum / static_cast<double>(batch.rows * batch.cols);
}

namespace {

void check_oracle_size(const ContinuousRbm& rbm, const char* who) {
    if (rbm.mode != RbmMode::Binary)
        throw InvalidInputError(std::string(who) + ": Binary mode only");
    if (rbm.n_visible() + rbm.n_hidden() > 12)
        throw InvalidInputError(std::string(who) +
                                ": enumeration limited to n_visible + n_hidden <= 12");
}

// Unnormalized log-weight of a visible configuration with hidden units
// summed out: c'v + sum_j softplus(b_j + (W'v)_j).
double log_psi(const ContinuousRbm& rbm, const VectorD& v) {
    double lp = dot(rbm.visible_bias, v);
    const VectorD pre = matvec_t(rbm.weights, v);
    for (std::size_t j = 0; j < pre.size(); ++j)
        lp += softplus(pre[j] + rbm.hidden_bias[j]);
    return lp;
}

double log_partition(const ContinuousRbm& rbm) {
    const std::size_t nv = rbm.n_visible();
    VectorD v(nv, 0.0);
    double max_lp = -1e300;
    std::vector<double> lps;
    lps.reserve(std::size_t{1} << nv);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
        for (std::size_t i = 0; i < nv; ++i) v[i] = (mask >> i) & 1 ? 1.0 : 0.0;
        const double lp = log_psi(rbm, v);
        lps.push_back(lp);
        max_lp = std::max(max_lp, lp);
    }
    double acc = 0.0;
    for (double lp : lps) acc += std::exp(lp - max_lp);
    return max_lp + std::log(acc);
}

} // namespace

double exact_loglik(const ContinuousRbm& rbm, const Matrix& batch) {
    check_oracle_size(rbm, "exact_loglik");
    check_batch(rbm, batch, "exact_loglik");
    const double log_z = log_partition(rbm);
    double acc = 0.0;
    for (std::size_t r = 0; r < batch.rows; ++r)
        acc += log_psi(rbm, batch.row(r)) - log_z;
    return acc / static_cast<double>(batch.rows);
}

RbmGradient exact_loglik_gradient(const ContinuousRbm& rbm, const Matrix& batch) {
    check_oracle_size(rbm, "exact_loglik_gradient");
    check_batch(rbm, batch, "exact_loglik_gradient");
    const std::size_t nv = rbm.n_visible(), nh = rbm.n_hidden();

    RbmGradient g;
    g.d_weights = Matrix(nv, nh);
    g.d_visible_bias.assign(nv, 0.0);
    g.d_hidden_bias.assign(nh, 0.0);

    // data term: <v_i p(h_j|v)> over batch rows
    const double inv_n = 1.0 / static_cast<double>(batch.rows);
    for (std::size_t r = 0; r < batch.rows; ++r) {
        const VectorD v = batch.row(r);
        const VectorD hp = rbm.hidden_prob(v);
        add_outer(g.d_weights, v, hp, inv_n);
        axpy(g.d_visible_bias, v, inv_n);
        axpy(g.d_hidden_bias, hp, inv_n);
    }

    // model term: sum_v p(v) v_i p(h_j|v), hidden units summed out exactly
    const double log_z = log_partition(rbm);
    VectorD v(nv, 0.0);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
        for (std::size_t i = 0; i < nv; ++i) v[i] = (mask >> i) & 1 ? 1.0 : 0.0;
        const double pv = std::exp(log_psi(rbm, v) - log_z);
        const VectorD hp = rbm.hidden_prob(v);
        add_outer(g.d_weights, v, hp, -pv);
        axpy(g.d_visible_bias, v, -pv);
        axpy(g.d_hidden_bias, hp, -pv);
    }
    return g;
}

} // namespace regdbn
