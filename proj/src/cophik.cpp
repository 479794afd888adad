/*
 * Copyright 2026 The CoPhIK Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "cophik.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"

namespace cophik {

void RhoSearchConfig::validate() const {
    if (count < 1) throw ConfigError("rho search needs at least one candidate");
    if (!(lower <= upper)) throw ConfigError("rho search needs lower <= upper");
    if (count == 1 && lower != upper) throw ConfigError("a single rho candidate needs lower == upper");
    if (!(lower <= 1.0 && 1.0 <= upper)) throw ConfigError("rho search interval must contain 1");
}

double RhoSearchConfig::value(int i) const {
    if (count == 1) return lower;
    if (i == count - 1) return upper;
    return lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(count - 1);
}

DiscrepancyFit fit_discrepancy(const std::vector<Point>& locations, const Vector& y_high, const Vector& mu_low,
                               std::span<const double> extents, const RhoSearchConfig& rho_cfg,
                               const OptimizerConfig& opt_cfg, const NuggetPolicy& policy) {
    rho_cfg.validate();
    if (y_high.size() != mu_low.size() || static_cast<std::size_t>(y_high.size()) != locations.size())
        throw DimensionError("discrepancy inputs differ in length");

    const auto count = static_cast<std::size_t>(rho_cfg.count);
    std::vector<std::optional<OrdinaryKriging>> fits(count);
    parallel_for(count, [&](std::size_t i) {
        const double rho = rho_cfg.value(static_cast<int>(i));
        try {
            fits[i].emplace(fit_hyperparameters(ObservationSet(locations, y_high - rho * mu_low), extents, opt_cfg, policy));
        } catch (const NumericalError&) {
        }
    });

    DiscrepancyFit out;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < count; ++i) {
        out.rho_values.push_back(rho_cfg.value(static_cast<int>(i)));
        double ll = fits[i] ? fits[i]->log_likelihood() : -std::numeric_limits<double>::infinity();
        out.rho_log_likelihoods.push_back(ll);
        if (fits[i] && (!best || ll > out.rho_log_likelihoods[*best])) best = i;
    }
    if (!best) throw NumericalError("discrepancy fit failed for every rho candidate");
    const auto& m = *fits[*best];
    out.rho = out.rho_values[*best];
    out.params = m.kernel_params();
    out.mu_d = m.mu_hat();
    out.sigma2_hat = m.sigma2_hat();
    out.log_likelihood = m.log_likelihood();
    return out;
}

Matrix assemble_joint_cov(const Matrix& c1, const Matrix& c2, double rho) {
    if (c1.rows() != c1.cols() || c2.rows() != c2.cols() || c1.rows() != c2.rows())
        throw DimensionError("joint covariance blocks must be square and equal-sized");
    const auto n = c1.rows();
    Matrix c(2 * n, 2 * n);
    c.topLeftCorner(n, n) = c1;
    c.topRightCorner(n, n) = rho * c1;
    c.bottomLeftCorner(n, n) = rho * c1;
    c.bottomRightCorner(n, n) = rho * rho * c1 + c2;
    return c;
}

Vector block_inverse_apply(const SpdFactorization& c1, const SpdFactorization& c2, double rho, const Vector& residual) {
    const auto n = c1.size();
    if (c2.size() != n || residual.size() != 2 * n) throw DimensionError("block inverse size mismatch");
    const Vector r_low = residual.head(n);
    const Vector r_high = residual.tail(n);
    const Vector w = c2.solve(r_high - rho * r_low);
    Vector out(2 * n);
    out.head(n) = c1.solve(r_low) - rho * w;
    out.tail(n) = w;
    return out;
}

double joint_log_likelihood(const SpdFactorization& c1, const SpdFactorization& c2, double rho, const Vector& y_low,
                            const Vector& y_high, const Vector& mu_low, const Vector& mu_high) {
    const auto n = c1.size();
    if (c2.size() != n || y_low.size() != n || y_high.size() != n || mu_low.size() != n || mu_high.size() != n)
        throw DimensionError("joint likelihood size mismatch");
    const Vector r_low = y_low - mu_low;
    const Vector r_high = y_high - mu_high;
    const double quad = c1.quad_form(r_low) + c2.quad_form(r_high - rho * r_low);
    return -0.5 * quad - 0.5 * (c1.log_det() + c2.log_det()) - static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
}

YLowSelection select_y_low(std::span<const Vector> candidates, const Vector& mu_low, const Vector& y_high, double rho,
                           double mu_d, const SpdFactorization& c1, const SpdFactorization& c2) {
    const Vector mu_high = rho * mu_low + Vector::Constant(mu_low.size(), mu_d);
    YLowSelection sel;
    double best = -std::numeric_limits<double>::infinity();
    bool found = false;
    const std::size_t total = candidates.size() + 1;
    for (std::size_t k = 0; k < total; ++k) {
        const Vector& y_low = k < candidates.size() ? candidates[k] : mu_low;
        double ll = joint_log_likelihood(c1, c2, rho, y_low, y_high, mu_low, mu_high);
        sel.log_likelihoods.push_back(ll);
        if (std::isfinite(ll) && (!found || ll > best)) {
            best = ll;
            found = true;
            sel.candidate = k;
        }
    }
    if (!found) throw NumericalError("no low-fidelity candidate has a finite joint likelihood");
    if (sel.candidate < candidates.size()) {
        sel.member = sel.candidate;
        sel.y_low = candidates[sel.candidate];
    } else {
        sel.y_low = mu_low;
    }
    return sel;
}

namespace {

Matrix discrepancy_matrix(const std::vector<Point>& x, const GaussianKernelParams& p) {
    return assemble_covariance([&](const Point& a, const Point& b) { return gaussian_kernel(p, a, b); }, x);
}

}  // namespace

CoPhikModel CoPhikModel::fit(std::shared_ptr<const Ensemble> ens, NodeObservations obs, const CophikConfig& cfg) {
    CoPhikModel m;
    m.ens_ = std::move(ens);
    m.low_ = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(*m.ens_));
    m.obs_ = std::move(obs);
    const Grid& grid = m.ens_->grid();
    for (auto n : m.obs_.nodes) m.locations_.push_back(grid.node(n));
    m.mu_low_ = m.low_->mean_at(m.obs_.nodes);

    m.c1_ = spd_factorize(m.low_->cov_matrix(m.obs_.nodes), cfg.nugget);
    auto extents = grid.extents();
    DiscrepancyFit d = fit_discrepancy(m.locations_, m.obs_.values, m.mu_low_, extents, cfg.rho, cfg.optimizer, cfg.nugget);
    m.params_.rho = d.rho;
    m.params_.d_params = d.params;
    m.params_.mu_d = d.mu_d;
    m.c2_ = spd_factorize(discrepancy_matrix(m.locations_, d.params), cfg.nugget);
    m.params_.nugget_low = m.c1_.nugget();
    m.params_.nugget_d = m.c2_.nugget();

    std::vector<Vector> candidates;
    candidates.reserve(m.ens_->size());
    for (std::size_t k = 0; k < m.ens_->size(); ++k) candidates.push_back(m.ens_->at_nodes(k, m.obs_.nodes));
    YLowSelection sel = select_y_low(candidates, m.mu_low_, m.obs_.values, d.rho, d.mu_d, m.c1_, m.c2_);
    m.params_.member = sel.member;
    m.y_low_ = sel.y_low;
    m.discrepancy_ = std::move(d);
    m.selection_ = std::move(sel);
    m.finish();
    return m;
}

CoPhikModel CoPhikModel::rebuild(std::shared_ptr<const Ensemble> ens, NodeObservations obs, const Parameters& params) {
    CoPhikModel m;
    m.ens_ = std::move(ens);
    m.low_ = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(*m.ens_));
    m.obs_ = std::move(obs);
    m.params_ = params;
    m.params_.d_params.validate();
    const Grid& grid = m.ens_->grid();
    for (auto n : m.obs_.nodes) m.locations_.push_back(grid.node(n));
    m.mu_low_ = m.low_->mean_at(m.obs_.nodes);
    m.c1_ = spd_factorize_fixed(m.low_->cov_matrix(m.obs_.nodes), params.nugget_low);
    m.c2_ = spd_factorize_fixed(discrepancy_matrix(m.locations_, params.d_params), params.nugget_d);
    if (params.member) {
        if (*params.member >= m.ens_->size()) throw ConfigError("selected ensemble member index out of range");
        m.y_low_ = m.ens_->at_nodes(*params.member, m.obs_.nodes);
    } else {
        m.y_low_ = m.mu_low_;
    }
    m.finish();
    return m;
}

void CoPhikModel::finish() {
    const auto n = static_cast<Eigen::Index>(obs_.size());
    const double rho = params_.rho;
    const Vector ones = Vector::Ones(n);
    Vector residual(2 * n);
    residual.head(n) = y_low_ - mu_low_;
    residual.tail(n) = obs_.values - (rho * mu_low_ + params_.mu_d * ones);
    joint_weights_ = block_inverse_apply(c1_, c2_, rho, residual);
    a_ = c1_.solve(obs_.values - mu_low_);
    b_ = c1_.solve(obs_.values - y_low_);
    q_ = c2_.solve(obs_.values - rho * y_low_ - params_.mu_d * ones);
}

Vector CoPhikModel::discrepancy_cov(std::size_t node) const {
    const Point x = ens_->grid().node(node);
    Vector c(static_cast<Eigen::Index>(locations_.size()));
    for (std::size_t i = 0; i < locations_.size(); ++i)
        c[static_cast<Eigen::Index>(i)] = gaussian_kernel(params_.d_params, locations_[i], x);
    return c;
}

Vector CoPhikModel::joint_cov_vector(std::size_t node) const {
    const auto n = static_cast<Eigen::Index>(obs_.size());
    const double rho = params_.rho;
    const Vector c_low = low_->cov_vector(obs_.nodes, node);
    Vector c(2 * n);
    c.head(n) = rho * c_low;
    c.tail(n) = rho * rho * c_low + discrepancy_cov(node);
    return c;
}

double CoPhikModel::joint_log_likelihood() const {
    const Vector mu_high = params_.rho * mu_low_ + Vector::Constant(mu_low_.size(), params_.mu_d);
    return cophik::joint_log_likelihood(c1_, c2_, params_.rho, y_low_, obs_.values, mu_low_, mu_high);
}

Prediction CoPhikModel::predict(std::size_t node) const {
    const double rho = params_.rho;
    const Vector c = joint_cov_vector(node);
    const double mean = rho * low_->mean(node) + params_.mu_d + c.dot(joint_weights_);
    const double prior = rho * rho * low_->variance(node) + params_.d_params.sigma2;
    const double var = prior - c.dot(block_inverse_apply(c1_, c2_, rho, c));
    return make_prediction(mean, var);
}

std::pair<Field, Field> CoPhikModel::predict_grid() const {
    const Grid& g = ens_->grid();
    std::vector<double> mean(g.node_count()), var(g.node_count());
    parallel_for(g.node_count(), [&](std::size_t i) {
        auto p = predict(i);
        mean[i] = p.mean;
        var[i] = p.variance;
    });
    return {Field(g, std::move(mean)), Field(g, std::move(var))};
}

Decomposition CoPhikModel::decomposition(std::size_t node) const {
    const double rho = params_.rho;
    const Vector c_low = low_->cov_vector(obs_.nodes, node);
    Decomposition d;
    d.s1 = rho * (low_->mean(node) + c_low.dot(a_));
    d.s2 = rho * c_low.dot(b_);
    d.s3 = params_.mu_d + discrepancy_cov(node).dot(q_);
    return d;
}

Field CoPhikModel::discrepancy_column(std::size_t i) const {
    const Grid& g = ens_->grid();
    std::vector<double> v(g.node_count());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = gaussian_kernel(params_.d_params, g.node(n), locations_[i]);
    return Field(g, std::move(v));
}

}  // namespace cophik
