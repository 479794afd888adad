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

#include "gp.hpp"

namespace cophik {

/// M realizations of a stochastic model on one grid, stored member-major
/// (row m holds member m at every node).
class Ensemble {
public:
    Ensemble() = default;
    Ensemble(Grid grid, Matrix members);
    static Ensemble from_fields(const std::vector<Field>& members);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return static_cast<std::size_t>(members_.rows()); }
    const Matrix& data() const { return members_; }
    double value(std::size_t member, std::size_t node) const {
        return members_(static_cast<Eigen::Index>(member), static_cast<Eigen::Index>(node));
    }
    Field member(std::size_t m) const;
    /// Values of member m at the given nodes.
    Vector at_nodes(std::size_t m, std::span<const std::size_t> nodes) const;

private:
    Grid grid_;
    Matrix members_;
};

struct MeanCov {
    double mean = 0.0;
    double cov = 0.0;
};

/// Ensemble mean at node i and sample covariance (1/(M-1)) between nodes i and j.
MeanCov ensemble_mean_cov(const Ensemble& ens, std::size_t i, std::size_t j);

/// Coarse ensemble plus paired fine/coarse realizations for a two-level
/// estimator. Coarse values are interpolated multilinearly to fine nodes.
struct TwoLevelEnsemble {
    Ensemble coarse;         // u_L^m, m = 1..M_L, coarse grid
    Ensemble fine;           // u_H^m, m = 1..M_H, fine grid
    Ensemble coarse_paired;  // u_L^m paired with u_H^m, coarse grid

    void validate() const;
    const Grid& grid() const { return fine.grid(); }
    /// Coarse member `m` interpolated to every fine node.
    Vector coarse_on_fine(const Ensemble& e, std::size_t m) const;
    /// u_bar^m = u_H^m - u_L^m on fine nodes.
    Vector correction(std::size_t m) const;
};

double mlmc_mean(const TwoLevelEnsemble& tle, std::size_t node);
double mlmc_cov(const TwoLevelEnsemble& tle, std::size_t i, std::size_t j);

/// Gaussian-process prior whose mean and covariance are ensemble
/// statistics. The covariance is a weighted sum of centered outer products
/// evaluated on demand, k(i,j) = sum_l w_l D_l(:,i) . D_l(:,j).
class EnsembleGp {
public:
    static EnsembleGp from_ensemble(const Ensemble& ens);
    static EnsembleGp from_two_level(const TwoLevelEnsemble& tle);

    const Grid& grid() const { return grid_; }
    double mean(std::size_t node) const { return mean_[static_cast<Eigen::Index>(node)]; }
    double cov(std::size_t i, std::size_t j) const;
    double variance(std::size_t node) const { return cov(node, node); }

    Field mean_field() const;
    Field std_field() const;
    Vector mean_at(std::span<const std::size_t> nodes) const;
    Matrix cov_matrix(std::span<const std::size_t> nodes) const;
    Vector cov_vector(std::span<const std::size_t> nodes, std::size_t node) const;
    /// k(., x_i) as a field over all nodes.
    Field cov_column(std::size_t node) const;

private:
    struct Level {
        Matrix deviations;  // members x nodes, centered per node
        double weight = 0.0;
    };
    Grid grid_;
    Vector mean_;
    std::vector<Level> levels_;
};

/// Ensemble covariance matrix at observation locations; each must be a grid node.
Matrix ensemble_cov_matrix(const Ensemble& ens, const ObservationSet& obs);

/// Constant mean shift that maximizes the Gaussian log likelihood,
/// 1^T C^{-1}(y - mu) / 1^T C^{-1} 1.
double modified_phik_delta_mu(const SpdFactorization& fact, const Vector& y, const Vector& mu);

/// PhIK regression on grid nodes. With `modified`, the prior mean is shifted
/// by the likelihood-optimal constant.
class PhikRegressor {
public:
    PhikRegressor(std::shared_ptr<const EnsembleGp> prior, NodeObservations obs, bool modified = false,
                  const NuggetPolicy& policy = {}, std::optional<double> fixed_nugget = std::nullopt);

    const EnsembleGp& prior() const { return *prior_; }
    const NodeObservations& observations() const { return obs_; }
    const SpdFactorization& factorization() const { return fact_; }
    double delta_mu() const { return delta_mu_; }
    bool modified() const { return modified_; }
    /// C^{-1}(y - mu - delta_mu 1)
    const Vector& coefficients() const { return coeffs_; }
    Vector prior_mean_at_obs() const { return prior_mean_obs_; }

    Prediction predict(std::size_t node) const;
    /// Posterior mean and variance on every grid node.
    std::pair<Field, Field> predict_grid() const;
    double log_likelihood() const;

private:
    std::shared_ptr<const EnsembleGp> prior_;
    NodeObservations obs_;
    bool modified_ = false;
    Vector prior_mean_obs_;
    SpdFactorization fact_;
    double delta_mu_ = 0.0;
    Vector coeffs_;
};

Prediction phik_predict(const Ensemble& ens, const ObservationSet& obs, std::size_t node,
                        const NuggetPolicy& policy = {});
Prediction modified_phik_predict(const Ensemble& ens, const ObservationSet& obs, std::size_t node,
                                 const NuggetPolicy& policy = {});
Prediction mlmc_predict(const TwoLevelEnsemble& tle, const ObservationSet& obs, std::size_t node,
                        const NuggetPolicy& policy = {});

}  // namespace cophik
