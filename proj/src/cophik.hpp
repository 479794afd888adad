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

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "kriging.hpp"
#include "phik.hpp"

namespace cophik {

/// Candidate grid for the regression scalar rho.
struct RhoSearchConfig {
    double lower = 0.0;
    double upper = 2.0;
    int count = 41;

    void validate() const;
    double value(int i) const;
};

/// Result of the discrepancy-GP fit: the rho with the best discrepancy
/// likelihood and its Kriging hyperparameters.
struct DiscrepancyFit {
    double rho = 1.0;
    GaussianKernelParams params;
    double mu_d = 0.0;
    double sigma2_hat = 0.0;
    double log_likelihood = 0.0;
    std::vector<double> rho_values;
    std::vector<double> rho_log_likelihoods;  // -inf where the fit failed
};

/// For each candidate rho fits ordinary Kriging to y_d = y_H - rho mu_L(X)
/// and keeps the best likelihood; ties go to the smaller rho.
DiscrepancyFit fit_discrepancy(const std::vector<Point>& locations, const Vector& y_high, const Vector& mu_low,
                               std::span<const double> extents, const RhoSearchConfig& rho_cfg,
                               const OptimizerConfig& opt_cfg, const NuggetPolicy& policy = {});

/// [[C1, rho C1], [rho C1, rho^2 C1 + C2]]
Matrix assemble_joint_cov(const Matrix& c1, const Matrix& c2, double rho);

/// Applies the inverse of the joint covariance through its block form
/// [[C1^-1 + rho^2 C2^-1, -rho C2^-1], [-rho C2^-1, C2^-1]].
Vector block_inverse_apply(const SpdFactorization& c1, const SpdFactorization& c2, double rho, const Vector& residual);

/// Joint log likelihood of (y_L, y_H) under the two-level model, evaluated
/// blockwise (|C~| = |C1||C2|).
double joint_log_likelihood(const SpdFactorization& c1, const SpdFactorization& c2, double rho, const Vector& y_low,
                            const Vector& y_high, const Vector& mu_low, const Vector& mu_high);

struct YLowSelection {
    Vector y_low;
    /// Ensemble member index, or empty when the ensemble mean won.
    std::optional<std::size_t> member;
    std::size_t candidate = 0;
    std::vector<double> log_likelihoods;
};

/// Picks the low-fidelity vector with the highest joint likelihood among
/// `candidates` (members, in order) followed by mu_L. Ties go to the lowest
/// candidate index.
YLowSelection select_y_low(std::span<const Vector> candidates, const Vector& mu_low, const Vector& y_high, double rho,
                           double mu_d, const SpdFactorization& c1, const SpdFactorization& c2);

struct CophikConfig {
    RhoSearchConfig rho;
    OptimizerConfig optimizer;
    NuggetPolicy nugget;
};

struct Decomposition {
    double s1 = 0.0;
    double s2 = 0.0;
    double s3 = 0.0;
};

/// Two-level CoKriging with an ensemble-built low-fidelity GP and a
/// stationary Gaussian discrepancy GP, sharing one location set.
class CoPhikModel {
public:
    struct Parameters {
        double rho = 1.0;
        GaussianKernelParams d_params;
        double mu_d = 0.0;
        std::optional<std::size_t> member;  // source of y_L; empty = ensemble mean
        double nugget_low = 0.0;
        double nugget_d = 0.0;
    };

    static CoPhikModel fit(std::shared_ptr<const Ensemble> ens, NodeObservations obs, const CophikConfig& cfg);
    /// Rebuilds a fitted model from its recorded parameters without any search.
    static CoPhikModel rebuild(std::shared_ptr<const Ensemble> ens, NodeObservations obs, const Parameters& params);

    const Parameters& parameters() const { return params_; }
    double rho() const { return params_.rho; }
    double mu_d() const { return params_.mu_d; }
    const GaussianKernelParams& d_params() const { return params_.d_params; }
    const Vector& y_low() const { return y_low_; }
    const Vector& y_high() const { return obs_.values; }
    const Vector& mu_low_at_obs() const { return mu_low_; }
    const NodeObservations& observations() const { return obs_; }
    const Ensemble& ensemble() const { return *ens_; }
    const EnsembleGp& low_gp() const { return *low_; }
    const SpdFactorization& c1() const { return c1_; }
    const SpdFactorization& c2() const { return c2_; }
    const std::optional<DiscrepancyFit>& discrepancy_fit() const { return discrepancy_; }
    const std::optional<YLowSelection>& selection() const { return selection_; }

    /// k_d(x*, x_i) for all observations.
    Vector discrepancy_cov(std::size_t node) const;
    /// Joint covariance vector (rho c_L, c_H).
    Vector joint_cov_vector(std::size_t node) const;
    double joint_log_likelihood() const;

    Prediction predict(std::size_t node) const;
    std::pair<Field, Field> predict_grid() const;
    Decomposition decomposition(std::size_t node) const;

    /// Field of k_d(., x_i).
    Field discrepancy_column(std::size_t i) const;

private:
    CoPhikModel() = default;
    void finish();

    std::shared_ptr<const Ensemble> ens_;
    std::shared_ptr<const EnsembleGp> low_;
    NodeObservations obs_;
    std::vector<Point> locations_;
    Parameters params_;
    Vector mu_low_;
    Vector y_low_;
    SpdFactorization c1_;
    SpdFactorization c2_;
    Vector joint_weights_;  // C~^{-1}(y~ - mu~)
    Vector a_, b_, q_;
    std::optional<DiscrepancyFit> discrepancy_;
    std::optional<YLowSelection> selection_;
};

}  // namespace cophik
