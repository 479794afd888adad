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

#include "spd.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

namespace cophik {

namespace {

// Pivots below this fraction of the largest diagonal entry are treated as a
// breakdown; Eigen's LLT only rejects non-positive pivots.
std::optional<Matrix> try_cholesky(const Matrix& a) {
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) return std::nullopt;
    Matrix l = llt.matrixL();
    const double floor = static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() *
                         a.diagonal().cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        double p = l(i, i) * l(i, i);
        if (!std::isfinite(p) || !(p > floor)) return std::nullopt;
    }
    return l;
}

void check_square_finite(const Matrix& c) {
    if (c.rows() != c.cols() || c.rows() < 1) throw DimensionError("factorization needs a non-empty square matrix");
    if (!c.allFinite()) throw NumericalError("matrix has non-finite entries");
}

}  // namespace

void NuggetPolicy::validate() const {
    if (!(initial > 0.0)) throw ConfigError("nugget initial value must be positive");
    if (!(cap >= initial)) throw ConfigError("nugget cap must be at least the initial value");
    if (!(growth > 1.0)) throw ConfigError("nugget growth factor must exceed 1");
}

SpdFactorization::SpdFactorization(Matrix regularized, Matrix lower, double nugget)
    : regularized_(std::move(regularized)), lower_(std::move(lower)), nugget_(nugget) {
    log_det_ = 2.0 * lower_.diagonal().array().log().sum();
}

Vector SpdFactorization::half_solve(const Vector& b) const {
    if (b.size() != size()) throw DimensionError("right-hand side length does not match factorization");
    return lower_.triangularView<Eigen::Lower>().solve(b);
}

Vector SpdFactorization::solve(const Vector& b) const {
    Vector z = half_solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(z);
}

Matrix SpdFactorization::solve_matrix(const Matrix& b) const {
    if (b.rows() != size()) throw DimensionError("right-hand side rows do not match factorization");
    Matrix z = lower_.triangularView<Eigen::Lower>().solve(b);
    return lower_.transpose().triangularView<Eigen::Upper>().solve(z);
}

double SpdFactorization::quad_form(const Vector& b) const { return half_solve(b).squaredNorm(); }

SpdFactorization spd_factorize(const Matrix& c, const NuggetPolicy& policy) {
    check_square_finite(c);
    policy.validate();
    double scale = c.diagonal().mean();
    if (!(scale > 0.0)) scale = 1.0;
    const double cap = policy.cap * scale;
    double alpha = 0.0;
    double next = policy.initial * scale;
    while (true) {
        Matrix a = c;
        a.diagonal().array() += alpha;
        if (auto l = try_cholesky(a)) return SpdFactorization(std::move(a), std::move(*l), alpha);
        if (alpha >= cap) break;
        alpha = std::min(next, cap);
        next *= policy.growth;
    }
    throw NumericalError("covariance matrix not factorizable with nugget up to the cap");
}

SpdFactorization spd_factorize_fixed(const Matrix& c, double nugget) {
    check_square_finite(c);
    Matrix a = c;
    a.diagonal().array() += nugget;
    auto l = try_cholesky(a);
    if (!l) throw NumericalError("covariance matrix not factorizable with the recorded nugget");
    return SpdFactorization(std::move(a), std::move(*l), nugget);
}

double log_marginal_likelihood(const Vector& y, const Vector& mu, const SpdFactorization& fact) {
    if (y.size() != fact.size() || mu.size() != fact.size()) throw DimensionError("likelihood vector length mismatch");
    const double n = static_cast<double>(y.size());
    return -0.5 * fact.quad_form(y - mu) - 0.5 * fact.log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace cophik
