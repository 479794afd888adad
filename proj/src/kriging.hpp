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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gp.hpp"
#include "optimizer.hpp"

namespace cophik {

/// Multi-start simplex search over log correlation lengths.
struct OptimizerConfig {
    /// Bounds on l_i are [lower_factor, upper_factor] times the axis extent.
    double lower_factor = 1e-2;
    double upper_factor = 1e2;
    int starts = 10;
    double tolerance = 1e-8;
    int max_iterations = 500;
    std::uint64_t seed = 0;

    void validate() const;
    Box log_bounds(std::span<const double> extents) const;
};

struct MleEstimates {
    double mu = 0.0;
    double sigma2 = 0.0;
};

/// Closed-form mu and sigma^2 for a unit-variance correlation matrix.
MleEstimates mle_mean_variance(const SpdFactorization& psi, const Vector& y);

/// Smallest process variance used inside the likelihood. A residual that
/// vanishes after mean removal would otherwise give an infinite likelihood.
double variance_floor(const Vector& y);

/// Ln L at (mu_hat, sigma2_hat) for the given correlation factorization.
double concentrated_log_likelihood(const SpdFactorization& psi, const Vector& y, const MleEstimates& est);

class OrdinaryKriging {
public:
    /// Model at fixed lengths; Psi is factored with the nugget ladder, or with
    /// exactly `fixed_nugget` when given.
    OrdinaryKriging(ObservationSet obs, Vector lengths, const NuggetPolicy& policy = {},
                    std::optional<double> fixed_nugget = std::nullopt);

    const ObservationSet& observations() const { return obs_; }
    const Vector& lengths() const { return lengths_; }
    double mu_hat() const { return est_.mu; }
    double sigma2_hat() const { return est_.sigma2; }
    /// sigma2_hat raised to the likelihood floor; always positive.
    double sigma2_effective() const { return std::max(est_.sigma2, variance_floor(obs_.values())); }
    const SpdFactorization& psi() const { return psi_; }
    double log_likelihood() const { return log_likelihood_; }

    GaussianKernelParams kernel_params() const { return {sigma2_effective(), lengths_}; }

    /// Correlation vector psi(x*).
    Vector correlations(const Point& xstar) const;
    Prediction predict(const Point& xstar) const;

private:
    ObservationSet obs_;
    Vector lengths_;
    Vector inv_lengths_;
    SpdFactorization psi_;
    MleEstimates est_;
    Vector weights_;  // Psi^{-1}(y - 1 mu)
    double log_likelihood_ = 0.0;
};

/// Record of the likelihood search, for audits and tests.
struct FitTrace {
    std::vector<Vector> start_points;  // log lengths
    std::vector<double> start_values;  // ln L at each start
    std::vector<Vector> evaluated_points;
    std::vector<double> evaluated_values;
    std::size_t best_start = 0;
};

/// Maximizes the concentrated log marginal likelihood over the correlation
/// lengths. Ties between starts go to the lowest start index.
OrdinaryKriging fit_hyperparameters(const ObservationSet& obs, std::span<const double> extents,
                                    const OptimizerConfig& cfg, const NuggetPolicy& policy = {},
                                    FitTrace* trace = nullptr);

}  // namespace cophik
