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

#include "constraint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace cophik {

namespace {

std::vector<std::size_t> strides(const Grid& g) {
    std::vector<std::size_t> s(g.dim(), 1);
    for (std::size_t k = g.dim(); k-- > 1;) s[k - 1] = s[k] * g.axis(k).count;
    return s;
}

}  // namespace

LinearOperator::LinearOperator(Kind kind, Grid grid, std::vector<std::size_t> out, std::size_t axis, bool boundary_set)
    : kind_(kind), grid_(std::move(grid)), out_(std::move(out)), axis_(axis), boundary_set_(boundary_set) {
    if (out_.empty()) throw ConfigError("operator has no output nodes on this grid");
}

LinearOperator LinearOperator::point_evaluation(const Grid& grid, std::vector<std::size_t> nodes) {
    for (auto n : nodes)
        if (n >= grid.node_count()) throw ConfigError("point-evaluation node " + std::to_string(n) + " is out of range");
    return LinearOperator(Kind::PointEvaluation, grid, std::move(nodes), 0, false);
}

LinearOperator LinearOperator::boundary(const Grid& grid) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        auto mi = grid.multi_index(i);
        for (std::size_t k = 0; k < grid.dim(); ++k) {
            if (mi[k] == 0 || mi[k] + 1 == grid.axis(k).count) {
                nodes.push_back(i);
                break;
            }
        }
    }
    return LinearOperator(Kind::PointEvaluation, grid, std::move(nodes), 0, true);
}

LinearOperator LinearOperator::derivative(const Grid& grid, std::size_t axis) {
    if (axis >= grid.dim()) throw ConfigError("derivative axis " + std::to_string(axis) + " exceeds the grid dimension");
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        auto mi = grid.multi_index(i);
        if (mi[axis] > 0 && mi[axis] + 1 < grid.axis(axis).count) nodes.push_back(i);
    }
    return LinearOperator(Kind::Derivative, grid, std::move(nodes), axis, false);
}

LinearOperator LinearOperator::laplacian(const Grid& grid) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < grid.node_count(); ++i) {
        auto mi = grid.multi_index(i);
        bool interior = true;
        for (std::size_t k = 0; k < grid.dim(); ++k) interior = interior && mi[k] > 0 && mi[k] + 1 < grid.axis(k).count;
        if (interior) nodes.push_back(i);
    }
    return LinearOperator(Kind::Laplacian, grid, std::move(nodes), 0, false);
}

LinearOperator LinearOperator::parse(const std::string& text, const Grid& grid) {
    const std::string t = trim(text);
    if (t == "laplacian") return laplacian(grid);
    const auto colon = t.find(':');
    if (colon == std::string::npos) throw ConfigError("unknown operator '" + t + "'");
    const std::string head = t.substr(0, colon);
    const std::string body = t.substr(colon + 1);
    if (head == "deriv") return derivative(grid, static_cast<std::size_t>(parse_uint(body)));
    if (head == "point") {
        if (body == "boundary") return boundary(grid);
        std::vector<std::size_t> nodes;
        for (const auto& s : split(body, ',')) nodes.push_back(static_cast<std::size_t>(parse_uint(s)));
        return point_evaluation(grid, std::move(nodes));
    }
    throw ConfigError("unknown operator '" + t + "'");
}

std::string LinearOperator::spec() const {
    switch (kind_) {
        case Kind::Laplacian: return "laplacian";
        case Kind::Derivative: return "deriv:" + std::to_string(axis_);
        case Kind::PointEvaluation: {
            if (boundary_set_) return "point:boundary";
            std::string s = "point:";
            for (std::size_t i = 0; i < out_.size(); ++i) s += (i ? "," : "") + std::to_string(out_[i]);
            return s;
        }
    }
    return "";
}

double LinearOperator::at(std::span<const double> v, std::size_t node) const {
    switch (kind_) {
        case Kind::PointEvaluation: return v[node];
        case Kind::Derivative: {
            const std::size_t s = strides(grid_)[axis_];
            return (v[node + s] - v[node - s]) / (2.0 * grid_.axis(axis_).step());
        }
        case Kind::Laplacian: {
            const auto st = strides(grid_);
            double sum = 0.0;
            for (std::size_t k = 0; k < grid_.dim(); ++k) {
                const double h = grid_.axis(k).step();
                sum += (v[node + st[k]] - 2.0 * v[node] + v[node - st[k]]) / (h * h);
            }
            return sum;
        }
    }
    return 0.0;
}

Vector LinearOperator::apply(std::span<const double> values) const {
    if (values.size() != grid_.node_count()) throw DimensionError("operator input does not match the grid");
    Vector out(static_cast<Eigen::Index>(out_.size()));
    for (std::size_t i = 0; i < out_.size(); ++i) out[static_cast<Eigen::Index>(i)] = at(values, out_[i]);
    return out;
}

Vector LinearOperator::apply_constant(double c) const {
    std::vector<double> v(grid_.node_count(), c);
    return apply(v);
}

double rms_norm(const Vector& v) {
    if (v.size() == 0) throw DimensionError("norm of an empty vector");
    return std::sqrt(v.squaredNorm() / static_cast<double>(v.size()));
}

ConstraintData ConstraintData::from_members(const LinearOperator& op, const Ensemble& ens) {
    ConstraintData d;
    d.g.resize(static_cast<Eigen::Index>(ens.size()), static_cast<Eigen::Index>(op.output_nodes().size()));
    for (std::size_t m = 0; m < ens.size(); ++m) {
        const Vector row = ens.data().row(static_cast<Eigen::Index>(m)).transpose();
        d.g.row(static_cast<Eigen::Index>(m)) = op.apply(std::span<const double>(row.data(), row.size())).transpose();
    }
    d.estimate_eps(op, ens);
    return d;
}

ConstraintData ConstraintData::constant(const LinearOperator& op, const Ensemble& ens, double value) {
    ConstraintData d;
    d.g = Matrix::Constant(static_cast<Eigen::Index>(ens.size()), static_cast<Eigen::Index>(op.output_nodes().size()),
                           value);
    d.estimate_eps(op, ens);
    return d;
}

void ConstraintData::estimate_eps(const LinearOperator& op, const Ensemble& ens) {
    if (static_cast<std::size_t>(g.rows()) != ens.size() || static_cast<std::size_t>(g.cols()) != op.output_nodes().size())
        throw DimensionError("constraint data does not match the ensemble and operator");
    double worst = 0.0;
    for (std::size_t m = 0; m < ens.size(); ++m) {
        const Vector row = ens.data().row(static_cast<Eigen::Index>(m)).transpose();
        Vector lu = op.apply(std::span<const double>(row.data(), row.size()));
        worst = std::max(worst, rms_norm(lu - g.row(static_cast<Eigen::Index>(m)).transpose()));
    }
    eps = worst;
    eps_estimated = true;
}

Vector ConstraintData::mean() const { return g.colwise().mean().transpose(); }

double ConstraintData::spread() const {
    if (g.rows() < 2) throw ConfigError("constraint spread needs at least two members");
    const Vector gbar = mean();
    double s = 0.0;
    for (Eigen::Index m = 0; m < g.rows(); ++m) {
        const double n = rms_norm(g.row(m).transpose() - gbar);
        s += n * n;
    }
    return std::sqrt(s / static_cast<double>(g.rows() - 1));
}

double inverse_spectral_norm(const Matrix& c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigen-solve failed");
    const double lmin = es.eigenvalues().minCoeff();
    if (!(lmin > 0.0)) throw NumericalError("covariance matrix is not positive definite");
    return 1.0 / lmin;
}

NormTerms operator_norm_terms(const EnsembleGp& prior, std::span<const std::size_t> nodes,
                              const SpdFactorization& fact, const Vector& residual) {
    NormTerms t;
    for (auto n : nodes) t.sigmas.push_back(std::sqrt(std::max(prior.variance(n), 0.0)));
    t.inv_norm = inverse_spectral_norm(fact.regularized());
    t.residual_norm = residual.norm();
    return t;
}

KeyValues BoundReport::to_key_values() const {
    auto f = [](double v) { return format_double(v); };
    auto b = [](bool v) { return std::string(v ? "true" : "false"); };
    return {{"theorem", theorem},
            {"lhs", f(lhs)},
            {"rhs", f(rhs)},
            {"pass", b(pass)},
            {"eps", f(eps)},
            {"eps_source", eps_estimated ? "estimated" : "supplied"},
            {"term_eps", f(eps_term)},
            {"term_one_minus_rho", f(one_minus_rho_term)},
            {"term_spread", f(spread_term)},
            {"term_shift", f(shift_term)},
            {"term_discrepancy", f(discrepancy_term)},
            {"rho", f(rho)},
            {"rho_above_one", b(rho_above_one)},
            {"rounding_allowance", f(rounding_allowance)},
            {"sigma_g", f(sigma_g)},
            {"inv_norm", f(inv_norm)},
            {"residual_norm", f(residual_norm)},
            {"sigma_sum", f(sigma_sum)},
            {"inv_norm_d", f(inv_norm_d)},
            {"residual_norm_d", f(residual_norm_d)},
            {"kd_norm_sum", f(kd_norm_sum)},
            {"members", std::to_string(members)},
            {"outputs", std::to_string(outputs)}};
}

namespace {

double sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

void check_operator(const LinearOperator& op, const Grid& grid, const ConstraintData& cdata, std::size_t members) {
    if (!(op.grid() == grid)) throw DimensionError("operator grid differs from the model grid");
    if (static_cast<std::size_t>(cdata.g.rows()) != members || static_cast<std::size_t>(cdata.g.cols()) != op.output_nodes().size())
        throw DimensionError("constraint data does not match the ensemble and operator");
    if (members < 2) throw ConfigError("the bound needs at least two ensemble members");
}

void finish_lhs(BoundReport& r, const LinearOperator& op, const Field& mean, const ConstraintData& cdata) {
    const Vector lm = op.apply(mean);
    const Vector gbar = cdata.mean();
    r.lhs = rms_norm(lm - gbar);
    r.rounding_allowance = 4.0 * static_cast<double>(r.members) * std::numeric_limits<double>::epsilon() *
                           (rms_norm(lm) + rms_norm(gbar));
    r.pass = r.lhs <= r.rhs + r.rounding_allowance;
}

}  // namespace

BoundReport theorem1_bound(const PhikRegressor& model, const Ensemble& ens, const LinearOperator& op,
                           const ConstraintData& cdata) {
    const Grid& grid = model.prior().grid();
    check_operator(op, grid, cdata, ens.size());
    const double m = static_cast<double>(ens.size());
    const auto& obs = model.observations();

    BoundReport r;
    r.theorem = model.modified() ? "modified-phik" : "phik";
    r.members = ens.size();
    r.outputs = op.output_nodes().size();
    r.eps = cdata.eps;
    r.eps_estimated = cdata.eps_estimated;
    r.sigma_g = cdata.spread();

    const Vector residual = obs.values - model.prior_mean_at_obs() -
                            Vector::Constant(obs.values.size(), model.delta_mu());
    const NormTerms t = operator_norm_terms(model.prior(), obs.nodes, model.factorization(), residual);
    r.inv_norm = t.inv_norm;
    r.residual_norm = t.residual_norm;
    r.sigma_sum = sum(t.sigmas);

    r.eps_term = r.eps;
    r.spread_term = (2.0 * r.eps * std::sqrt(m / (m - 1.0)) + r.sigma_g) * r.inv_norm * r.residual_norm * r.sigma_sum;
    r.shift_term = rms_norm(op.apply_constant(model.delta_mu()));
    r.rhs = r.eps_term + r.spread_term + r.shift_term;

    finish_lhs(r, op, model.predict_grid().first, cdata);
    return r;
}

BoundReport theorem2_bound(const CoPhikModel& model, const LinearOperator& op, const ConstraintData& cdata) {
    const Ensemble& ens = model.ensemble();
    check_operator(op, ens.grid(), cdata, ens.size());
    const double m = static_cast<double>(ens.size());
    const auto& obs = model.observations();
    const double rho = model.rho();

    BoundReport r;
    r.theorem = "cophik";
    r.members = ens.size();
    r.outputs = op.output_nodes().size();
    r.eps = cdata.eps;
    r.eps_estimated = cdata.eps_estimated;
    r.sigma_g = cdata.spread();
    r.rho = rho;
    r.rho_above_one = rho > 1.0;

    const NormTerms t =
        operator_norm_terms(model.low_gp(), obs.nodes, model.c1(), model.y_low() - model.mu_low_at_obs());
    r.inv_norm = t.inv_norm;
    r.residual_norm = t.residual_norm;
    r.sigma_sum = sum(t.sigmas);

    r.residual_norm_d =
        (model.y_high() - rho * model.y_low() - Vector::Constant(obs.values.size(), model.mu_d())).norm();
    try {
        r.inv_norm_d = inverse_spectral_norm(model.c2().regularized());
    } catch (const NumericalError&) {
        if (r.residual_norm_d != 0.0) throw;
        r.inv_norm_d = std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = 0; i < obs.size(); ++i) r.kd_norm_sum += rms_norm(op.apply(model.discrepancy_column(i)));

    r.eps_term = rho * r.eps;
    r.one_minus_rho_term = (1.0 - rho) * rms_norm(cdata.mean());
    r.spread_term =
        rho * (2.0 * r.eps * std::sqrt(m / (m - 1.0)) + r.sigma_g) * r.inv_norm * r.residual_norm * r.sigma_sum;
    r.shift_term = rms_norm(op.apply_constant(model.mu_d()));
    // C_d^{-1} r_d vanishes with r_d; a degenerate C_d may carry an infinite norm.
    r.discrepancy_term =
        (r.residual_norm_d == 0.0 || r.kd_norm_sum == 0.0) ? 0.0 : r.inv_norm_d * r.residual_norm_d * r.kd_norm_sum;
    r.rhs = r.eps_term + r.one_minus_rho_term + r.spread_term + r.shift_term + r.discrepancy_term;

    finish_lhs(r, op, model.predict_grid().first, cdata);
    return r;
}

}  // namespace cophik
