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

#include "phik.hpp"

#include <cmath>
#include <numbers>

namespace cophik {

namespace {

void require_two_members(std::size_t m, const char* what) {
    if (m < 2) throw ConfigError(std::string(what) + " needs at least 2 members");
}

Matrix centered(const Matrix& rows, Vector* mean_out) {
    Vector mean = rows.colwise().mean().transpose();
    Matrix dev = rows.rowwise() - mean.transpose();
    if (mean_out) *mean_out = std::move(mean);
    return dev;
}

}  // namespace

Ensemble::Ensemble(Grid grid, Matrix members) : grid_(std::move(grid)), members_(std::move(members)) {
    if (members_.rows() < 1) throw ConfigError("ensemble needs at least one member");
    if (static_cast<std::size_t>(members_.cols()) != grid_.node_count())
        throw DimensionError("ensemble member length does not match grid");
    if (!members_.allFinite()) throw NumericalError("ensemble contains non-finite values");
}

Ensemble Ensemble::from_fields(const std::vector<Field>& members) {
    if (members.empty()) throw ConfigError("ensemble needs at least one member");
    const Grid& g = members.front().grid();
    Matrix data(static_cast<Eigen::Index>(members.size()), static_cast<Eigen::Index>(g.node_count()));
    for (std::size_t m = 0; m < members.size(); ++m) {
        if (!(members[m].grid() == g)) throw DimensionError("ensemble members live on different grids");
        data.row(static_cast<Eigen::Index>(m)) = members[m].as_vector().transpose();
    }
    return Ensemble(g, std::move(data));
}

Field Ensemble::member(std::size_t m) const {
    Vector row = members_.row(static_cast<Eigen::Index>(m)).transpose();
    return Field(grid_, std::vector<double>(row.data(), row.data() + row.size()));
}

Vector Ensemble::at_nodes(std::size_t m, std::span<const std::size_t> nodes) const {
    Vector v(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Eigen::Index>(i)] = value(m, nodes[i]);
    return v;
}

MeanCov ensemble_mean_cov(const Ensemble& ens, std::size_t i, std::size_t j) {
    require_two_members(ens.size(), "ensemble covariance");
    if (i >= ens.grid().node_count() || j >= ens.grid().node_count()) throw DimensionError("node index out of range");
    const auto M = static_cast<double>(ens.size());
    double mi = 0.0, mj = 0.0;
    for (std::size_t m = 0; m < ens.size(); ++m) {
        mi += ens.value(m, i);
        mj += ens.value(m, j);
    }
    mi /= M;
    mj /= M;
    double c = 0.0;
    for (std::size_t m = 0; m < ens.size(); ++m) c += (ens.value(m, i) - mi) * (ens.value(m, j) - mj);
    return {mi, c / (M - 1.0)};
}

void TwoLevelEnsemble::validate() const {
    require_two_members(coarse.size(), "two-level coarse level");
    require_two_members(fine.size(), "two-level correction level");
    if (coarse_paired.size() != fine.size()) throw DimensionError("paired coarse and fine member counts differ");
    if (!(coarse_paired.grid() == coarse.grid())) throw DimensionError("paired coarse members must share the coarse grid");
    if (coarse.grid().dim() != fine.grid().dim()) throw DimensionError("coarse and fine grids differ in dimension");
}

Vector TwoLevelEnsemble::coarse_on_fine(const Ensemble& e, std::size_t m) const {
    const Grid& fg = fine.grid();
    const Grid& cg = e.grid();
    Vector row = e.data().row(static_cast<Eigen::Index>(m)).transpose();
    std::span<const double> vals(row.data(), static_cast<std::size_t>(row.size()));
    Vector out(static_cast<Eigen::Index>(fg.node_count()));
    if (cg == fg) return row;
    for (std::size_t n = 0; n < fg.node_count(); ++n) out[static_cast<Eigen::Index>(n)] = interpolate(cg, vals, fg.node(n));
    return out;
}

Vector TwoLevelEnsemble::correction(std::size_t m) const {
    Vector h = fine.data().row(static_cast<Eigen::Index>(m)).transpose();
    return h - coarse_on_fine(coarse_paired, m);
}

double mlmc_mean(const TwoLevelEnsemble& tle, std::size_t node) {
    tle.validate();
    const auto n = static_cast<Eigen::Index>(node);
    double coarse = 0.0;
    for (std::size_t m = 0; m < tle.coarse.size(); ++m) coarse += tle.coarse_on_fine(tle.coarse, m)[n];
    double corr = 0.0;
    for (std::size_t m = 0; m < tle.fine.size(); ++m) corr += tle.correction(m)[n];
    return coarse / static_cast<double>(tle.coarse.size()) + corr / static_cast<double>(tle.fine.size());
}

double mlmc_cov(const TwoLevelEnsemble& tle, std::size_t i, std::size_t j) {
    tle.validate();
    const auto a = static_cast<Eigen::Index>(i);
    const auto b = static_cast<Eigen::Index>(j);
    auto level_cov = [&](std::size_t count, auto&& sample) {
        double mi = 0.0, mj = 0.0;
        std::vector<Vector> s;
        for (std::size_t m = 0; m < count; ++m) {
            s.push_back(sample(m));
            mi += s.back()[a];
            mj += s.back()[b];
        }
        mi /= static_cast<double>(count);
        mj /= static_cast<double>(count);
        double c = 0.0;
        for (const auto& v : s) c += (v[a] - mi) * (v[b] - mj);
        return c / static_cast<double>(count - 1);
    };
    return level_cov(tle.coarse.size(), [&](std::size_t m) { return tle.coarse_on_fine(tle.coarse, m); }) +
           level_cov(tle.fine.size(), [&](std::size_t m) { return tle.correction(m); });
}

EnsembleGp EnsembleGp::from_ensemble(const Ensemble& ens) {
    require_two_members(ens.size(), "ensemble prior");
    EnsembleGp gp;
    gp.grid_ = ens.grid();
    Level l;
    l.deviations = centered(ens.data(), &gp.mean_);
    l.weight = 1.0 / static_cast<double>(ens.size() - 1);
    gp.levels_.push_back(std::move(l));
    return gp;
}

EnsembleGp EnsembleGp::from_two_level(const TwoLevelEnsemble& tle) {
    tle.validate();
    const auto nodes = static_cast<Eigen::Index>(tle.grid().node_count());
    Matrix coarse(static_cast<Eigen::Index>(tle.coarse.size()), nodes);
    for (std::size_t m = 0; m < tle.coarse.size(); ++m)
        coarse.row(static_cast<Eigen::Index>(m)) = tle.coarse_on_fine(tle.coarse, m).transpose();
    Matrix corr(static_cast<Eigen::Index>(tle.fine.size()), nodes);
    for (std::size_t m = 0; m < tle.fine.size(); ++m)
        corr.row(static_cast<Eigen::Index>(m)) = tle.correction(m).transpose();

    EnsembleGp gp;
    gp.grid_ = tle.grid();
    Vector mc, md;
    Level lc{centered(coarse, &mc), 1.0 / static_cast<double>(tle.coarse.size() - 1)};
    Level ld{centered(corr, &md), 1.0 / static_cast<double>(tle.fine.size() - 1)};
    gp.mean_ = mc + md;
    gp.levels_.push_back(std::move(lc));
    gp.levels_.push_back(std::move(ld));
    return gp;
}

double EnsembleGp::cov(std::size_t i, std::size_t j) const {
    double c = 0.0;
    for (const auto& l : levels_)
        c += l.weight * l.deviations.col(static_cast<Eigen::Index>(i)).dot(l.deviations.col(static_cast<Eigen::Index>(j)));
    return c;
}

Field EnsembleGp::mean_field() const { return Field(grid_, std::vector<double>(mean_.data(), mean_.data() + mean_.size())); }

Field EnsembleGp::std_field() const {
    std::vector<double> s(grid_.node_count());
    for (std::size_t n = 0; n < s.size(); ++n) s[n] = std::sqrt(std::max(variance(n), 0.0));
    return Field(grid_, std::move(s));
}

Vector EnsembleGp::mean_at(std::span<const std::size_t> nodes) const {
    Vector v(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) v[static_cast<Eigen::Index>(i)] = mean(nodes[i]);
    return v;
}

Matrix EnsembleGp::cov_matrix(std::span<const std::size_t> nodes) const {
    const auto n = static_cast<Eigen::Index>(nodes.size());
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j <= i; ++j) {
            double v = cov(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
            c(i, j) = v;
            c(j, i) = v;
        }
    return c;
}

Vector EnsembleGp::cov_vector(std::span<const std::size_t> nodes, std::size_t node) const {
    Vector c(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) c[static_cast<Eigen::Index>(i)] = cov(nodes[i], node);
    return c;
}

Field EnsembleGp::cov_column(std::size_t node) const {
    std::vector<double> v(grid_.node_count());
    for (std::size_t n = 0; n < v.size(); ++n) v[n] = cov(n, node);
    return Field(grid_, std::move(v));
}

Matrix ensemble_cov_matrix(const Ensemble& ens, const ObservationSet& obs) {
    auto nodes = on_nodes(ens.grid(), obs).nodes;
    return EnsembleGp::from_ensemble(ens).cov_matrix(nodes);
}

double modified_phik_delta_mu(const SpdFactorization& fact, const Vector& y, const Vector& mu) {
    if (y.size() != fact.size() || mu.size() != fact.size()) throw DimensionError("delta-mu vector length mismatch");
    const Vector ones = Vector::Ones(y.size());
    const Vector w = fact.solve(ones);
    const double denom = ones.dot(w);
    if (!(denom > 0.0) || !std::isfinite(denom)) throw NumericalError("1^T C^{-1} 1 is not positive");
    return w.dot(y - mu) / denom;
}

PhikRegressor::PhikRegressor(std::shared_ptr<const EnsembleGp> prior, NodeObservations obs, bool modified,
                             const NuggetPolicy& policy, std::optional<double> fixed_nugget)
    : prior_(std::move(prior)), obs_(std::move(obs)), modified_(modified) {
    if (obs_.size() < 1) throw DimensionError("PhIK needs at least one observation");
    if (static_cast<std::size_t>(obs_.values.size()) != obs_.nodes.size())
        throw DimensionError("observation nodes and values differ in length");
    prior_mean_obs_ = prior_->mean_at(obs_.nodes);
    Matrix c = prior_->cov_matrix(obs_.nodes);
    fact_ = fixed_nugget ? spd_factorize_fixed(c, *fixed_nugget) : spd_factorize(c, policy);
    if (modified_) delta_mu_ = modified_phik_delta_mu(fact_, obs_.values, prior_mean_obs_);
    coeffs_ = fact_.solve(obs_.values - prior_mean_obs_ - Vector::Constant(obs_.values.size(), delta_mu_));
}

Prediction PhikRegressor::predict(std::size_t node) const {
    Vector c = prior_->cov_vector(obs_.nodes, node);
    double mean = prior_->mean(node) + delta_mu_ + c.dot(coeffs_);
    double var = prior_->variance(node) - fact_.quad_form(c);
    return make_prediction(mean, var);
}

std::pair<Field, Field> PhikRegressor::predict_grid() const {
    const auto n = prior_->grid().node_count();
    std::vector<double> mean(n), var(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto p = predict(i);
        mean[i] = p.mean;
        var[i] = p.variance;
    }
    return {Field(prior_->grid(), std::move(mean)), Field(prior_->grid(), std::move(var))};
}

double PhikRegressor::log_likelihood() const {
    return log_marginal_likelihood(obs_.values, prior_mean_obs_ + Vector::Constant(obs_.values.size(), delta_mu_), fact_);
}

namespace {

Prediction phik_once(const Ensemble& ens, const ObservationSet& obs, std::size_t node, bool modified,
                     const NuggetPolicy& policy) {
    auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(ens));
    return PhikRegressor(prior, on_nodes(ens.grid(), obs), modified, policy).predict(node);
}

}  // namespace

Prediction phik_predict(const Ensemble& ens, const ObservationSet& obs, std::size_t node, const NuggetPolicy& policy) {
    return phik_once(ens, obs, node, false, policy);
}

Prediction modified_phik_predict(const Ensemble& ens, const ObservationSet& obs, std::size_t node,
                                 const NuggetPolicy& policy) {
    return phik_once(ens, obs, node, true, policy);
}

Prediction mlmc_predict(const TwoLevelEnsemble& tle, const ObservationSet& obs, std::size_t node,
                        const NuggetPolicy& policy) {
    auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_two_level(tle));
    return PhikRegressor(prior, on_nodes(tle.grid(), obs), false, policy).predict(node);
}

}  // namespace cophik
