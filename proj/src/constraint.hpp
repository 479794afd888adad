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

#include <optional>
#include <string>
#include <vector>

#include "cophik.hpp"
#include "text.hpp"

namespace cophik {

/// Discrete linear operator on grid fields. Output values live on a node
/// subset: the listed nodes for point evaluation, nodes interior along the
/// axis for a derivative, nodes interior on every axis for the Laplacian.
class LinearOperator {
public:
    enum class Kind { PointEvaluation, Derivative, Laplacian };

    static LinearOperator point_evaluation(const Grid& grid, std::vector<std::size_t> nodes);
    /// Every node on the boundary of the box.
    static LinearOperator boundary(const Grid& grid);
    static LinearOperator derivative(const Grid& grid, std::size_t axis);
    static LinearOperator laplacian(const Grid& grid);

    /// "point:<node>,<node>,...", "point:boundary", "deriv:<axis>" or "laplacian".
    static LinearOperator parse(const std::string& text, const Grid& grid);
    std::string spec() const;

    Kind kind() const { return kind_; }
    const Grid& grid() const { return grid_; }
    const std::vector<std::size_t>& output_nodes() const { return out_; }

    Vector apply(std::span<const double> values) const;
    Vector apply(const Field& f) const { return apply(f.values()); }
    /// Operator applied to the constant field c.
    Vector apply_constant(double c) const;

private:
    LinearOperator(Kind kind, Grid grid, std::vector<std::size_t> out, std::size_t axis, bool boundary_set);
    double at(std::span<const double> v, std::size_t node) const;

    Kind kind_;
    Grid grid_;
    std::vector<std::size_t> out_;
    std::size_t axis_ = 0;
    bool boundary_set_ = false;
};

/// Root mean square over the entries; the function norm used by the bounds.
double rms_norm(const Vector& v);

/// Per-member right-hand sides g^m on the operator's output nodes and the
/// tolerance eps with ||L Y^m - g^m|| <= eps.
struct ConstraintData {
    Matrix g;  // members x outputs
    double eps = 0.0;
    bool eps_estimated = true;

    /// g^m = L Y^m, so the constraint holds exactly.
    static ConstraintData from_members(const LinearOperator& op, const Ensemble& ens);
    /// g^m = value for every member.
    static ConstraintData constant(const LinearOperator& op, const Ensemble& ens, double value);

    /// Replaces eps by max_m ||L Y^m - g^m||.
    void estimate_eps(const LinearOperator& op, const Ensemble& ens);

    Vector mean() const;
    /// sqrt(1/(M-1) sum_m ||g^m - g_bar||^2)
    double spread() const;
};

struct NormTerms {
    /// Ensemble standard deviation (1/(M-1)) at each observation node.
    std::vector<double> sigmas;
    /// Spectral norm of the inverse of the regularized covariance.
    double inv_norm = 0.0;
    double residual_norm = 0.0;
};

NormTerms operator_norm_terms(const EnsembleGp& prior, std::span<const std::size_t> nodes,
                              const SpdFactorization& fact, const Vector& residual);

/// Largest eigenvalue of the inverse, 1 / lambda_min, via a symmetric eigen-solve.
double inverse_spectral_norm(const Matrix& c);

struct BoundReport {
    std::string theorem;
    double lhs = 0.0;
    double eps = 0.0;
    bool eps_estimated = true;
    double eps_term = 0.0;
    double one_minus_rho_term = 0.0;
    double spread_term = 0.0;
    double shift_term = 0.0;
    double discrepancy_term = 0.0;
    double rhs = 0.0;
    double rho = 1.0;
    double sigma_g = 0.0;
    double inv_norm = 0.0;
    double residual_norm = 0.0;
    double sigma_sum = 0.0;
    double inv_norm_d = 0.0;
    double residual_norm_d = 0.0;
    double kd_norm_sum = 0.0;
    std::size_t members = 0;
    std::size_t outputs = 0;
    /// The (1 - rho) term is negative as written when rho > 1.
    bool rho_above_one = false;
    /// Forward rounding bound on the LHS evaluation, 4 M u (||L m|| + ||g_bar||);
    /// an exactly satisfied constraint otherwise leaves LHS at rounding level.
    double rounding_allowance = 0.0;
    /// lhs <= rhs + rounding_allowance
    bool pass = false;

    KeyValues to_key_values() const;
};

/// Both sides of the constraint-preservation bound for (modified) PhIK.
BoundReport theorem1_bound(const PhikRegressor& model, const Ensemble& ens, const LinearOperator& op,
                           const ConstraintData& cdata);

/// Both sides of the constraint-preservation bound for CoPhIK.
BoundReport theorem2_bound(const CoPhikModel& model, const LinearOperator& op, const ConstraintData& cdata);

}  // namespace cophik
