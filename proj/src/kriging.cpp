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

#include "kriging.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace cophik {

void OptimizerConfig::validate() const {
    if (!(lower_factor > 0.0) || !(upper_factor > lower_factor))
        throw ConfigError("length bounds need 0 < lower factor < upper factor");
    if (starts < 1) throw ConfigError("optimizer needs at least one start");
    if (!(tolerance > 0.0)) throw ConfigError("optimizer tolerance must be positive");
    if (max_iterations < 1) throw ConfigError("optimizer needs at least one iteration");
}

Box OptimizerConfig::log_bounds(std::span<const double> extents) const {
    Box b{Vector(static_cast<Eigen::Index>(extents.size())), Vector(static_cast<Eigen::Index>(extents.size()))};
    for (std::size_t k = 0; k < extents.size(); ++k) {
        if (!(extents[k] > 0.0)) throw ConfigError("axis extents must be positive");
        b.lower[static_cast<Eigen::Index>(k)] = std::log(lower_factor * extents[k]);
        b.upper[static_cast<Eigen::Index>(k)] = std::log(upper_factor * extents[k]);
    }
    return b;
}

MleEstimates mle_mean_variance(const SpdFactorization& psi, const Vector& y) {
    if (y.size() != psi.size()) throw DimensionError("observation count does not match correlation matrix");
    const Vector ones = Vector::Ones(y.size());
    const Vector psi_inv_ones = psi.solve(ones);
    const double denom = ones.dot(psi_inv_ones);
    if (!(denom > 0.0)) throw NumericalError("1^T Psi^{-1} 1 is not positive");
    MleEstimates e;
    e.mu = psi_inv_ones.dot(y) / denom;
    e.sigma2 = std::max(psi.quad_form(y - ones * e.mu) / static_cast<double>(y.size()), 0.0);
    return e;
}

double variance_floor(const Vector& y) {
    const double ms = y.size() ? y.squaredNorm() / static_cast<double>(y.size()) : 0.0;
    return 1e-14 * ms + 1e-300;
}

double concentrated_log_likelihood(const SpdFactorization& psi, const Vector& y, const MleEstimates& est) {
    const double n = static_cast<double>(y.size());
    const double s2 = std::max(est.sigma2, variance_floor(y));
    // (y-1mu)^T (s2 Psi)^{-1} (y-1mu) = n * sigma2 / s2
    return -0.5 * n * (est.sigma2 / s2) - 0.5 * (n * std::log(s2) + psi.log_det()) -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

OrdinaryKriging::OrdinaryKriging(ObservationSet obs, Vector lengths, const NuggetPolicy& policy,
                                 std::optional<double> fixed_nugget)
    : obs_(std::move(obs)), lengths_(std::move(lengths)) {
    if (static_cast<std::size_t>(lengths_.size()) != obs_.dim()) throw DimensionError("length count does not match dimension");
    GaussianKernelParams{1.0, lengths_}.validate();
    inv_lengths_ = lengths_.cwiseInverse();
    const auto n = static_cast<Eigen::Index>(obs_.size());
    Matrix psi(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            double r = gaussian_correlation(inv_lengths_, obs_.location(static_cast<std::size_t>(i)),
                                            obs_.location(static_cast<std::size_t>(j)));
            psi(i, j) = r;
            psi(j, i) = r;
        }
    }
    psi_ = fixed_nugget ? spd_factorize_fixed(psi, *fixed_nugget) : spd_factorize(psi, policy);
    est_ = mle_mean_variance(psi_, obs_.values());
    weights_ = psi_.solve(obs_.values() - Vector::Constant(n, est_.mu));
    log_likelihood_ = concentrated_log_likelihood(psi_, obs_.values(), est_);
}

Vector OrdinaryKriging::correlations(const Point& xstar) const {
    Vector r(static_cast<Eigen::Index>(obs_.size()));
    for (std::size_t i = 0; i < obs_.size(); ++i)
        r[static_cast<Eigen::Index>(i)] = gaussian_correlation(inv_lengths_, obs_.location(i), xstar);
    return r;
}

Prediction OrdinaryKriging::predict(const Point& xstar) const {
    Vector r = correlations(xstar);
    double mean = est_.mu + r.dot(weights_);
    double var = est_.sigma2 * (1.0 - psi_.quad_form(r));
    return make_prediction(mean, var);
}

OrdinaryKriging fit_hyperparameters(const ObservationSet& obs, std::span<const double> extents,
                                    const OptimizerConfig& cfg, const NuggetPolicy& policy, FitTrace* trace) {
    cfg.validate();
    if (extents.size() != obs.dim()) throw DimensionError("extent count does not match observation dimension");
    const Box box = cfg.log_bounds(extents);
    constexpr double kFailed = 1e300;

    auto objective = [&](const Vector& logl) {
        double value = kFailed;
        try {
            OrdinaryKriging m(obs, logl.array().exp().matrix(), policy);
            if (std::isfinite(m.log_likelihood())) value = -m.log_likelihood();
        } catch (const NumericalError&) {
        }
        if (trace) {
            trace->evaluated_points.push_back(logl);
            trace->evaluated_values.push_back(value >= kFailed ? -std::numeric_limits<double>::infinity() : -value);
        }
        return value;
    };

    Rng rng(cfg.seed);
    auto starts = latin_hypercube(box, cfg.starts, rng);
    double best_value = kFailed;
    Vector best;
    std::size_t best_start = 0;
    for (std::size_t s = 0; s < starts.size(); ++s) {
        if (trace) {
            trace->start_points.push_back(starts[s]);
            double v = objective(starts[s]);
            trace->start_values.push_back(v >= kFailed ? -std::numeric_limits<double>::infinity() : -v);
        }
        auto res = nelder_mead(objective, starts[s], box, cfg.tolerance, cfg.max_iterations);
        if (res.value < best_value) {
            best_value = res.value;
            best = res.x;
            best_start = s;
        }
    }
    if (best.size() == 0) throw NumericalError("no start produced a factorizable correlation matrix");
    if (trace) trace->best_start = best_start;
    return OrdinaryKriging(obs, best.array().exp().matrix(), policy);
}

}  // namespace cophik
