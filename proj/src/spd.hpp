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

#include "common.hpp"

namespace cophik {

/// Diagonal regularization ladder {0, a0, growth*a0, ..., cap}. The relative
/// values are multiplied by the mean diagonal of the matrix being factored.
struct NuggetPolicy {
    double initial = 1e-10;
    double growth = 10.0;
    double cap = 1e-4;

    void validate() const;
};

/// Cholesky factor of C + alpha*I for the smallest ladder alpha that works.
class SpdFactorization {
public:
    SpdFactorization() = default;
    SpdFactorization(Matrix regularized, Matrix lower, double nugget);

    Eigen::Index size() const { return lower_.rows(); }
    double nugget() const { return nugget_; }
    double log_det() const { return log_det_; }

    /// L (with L L^T = C + alpha I).
    const Matrix& lower() const { return lower_; }
    /// C + alpha I.
    const Matrix& regularized() const { return regularized_; }

    Vector solve(const Vector& b) const;
    Matrix solve_matrix(const Matrix& b) const;
    /// L^{-1} b
    Vector half_solve(const Vector& b) const;
    /// b^T (C + alpha I)^{-1} b
    double quad_form(const Vector& b) const;

private:
    Matrix regularized_;
    Matrix lower_;
    double nugget_ = 0.0;
    double log_det_ = 0.0;
};

/// Walks the nugget ladder until a Cholesky factorization with
/// non-degenerate pivots succeeds. Throws NumericalError at the cap.
SpdFactorization spd_factorize(const Matrix& c, const NuggetPolicy& policy = {});

/// Factorization with a fixed nugget (no ladder); used to rebuild a model
/// exactly as it was fit. Throws NumericalError when it fails.
SpdFactorization spd_factorize_fixed(const Matrix& c, double nugget);

/// -1/2 r^T C^{-1} r - 1/2 ln|C| - N/2 ln 2pi with r = y - mu.
double log_marginal_likelihood(const Vector& y, const Vector& mu, const SpdFactorization& fact);

}  // namespace cophik
