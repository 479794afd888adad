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

#include "kernel.hpp"

#include <cmath>

namespace cophik {

void GaussianKernelParams::validate() const {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) throw ConfigError("kernel variance must be positive");
    if (lengths.size() < 1) throw DimensionError("kernel needs at least one correlation length");
    for (Eigen::Index i = 0; i < lengths.size(); ++i)
        if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
            throw ConfigError("correlation lengths must be positive");
}

double gaussian_correlation(const Vector& inv_lengths, const Point& x, const Point& xp) {
    if (x.size() != inv_lengths.size() || xp.size() != inv_lengths.size())
        throw DimensionError("kernel dimension mismatch");
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double t = (x[i] - xp[i]) * inv_lengths[i];
        r2 += t * t;
    }
    return std::exp(-0.5 * r2);
}

double gaussian_kernel(const GaussianKernelParams& params, const Point& x, const Point& xp) {
    if (x.size() != params.lengths.size() || xp.size() != params.lengths.size())
        throw DimensionError("kernel dimension mismatch");
    double r2 = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double t = (x[i] - xp[i]) / params.lengths[i];
        r2 += t * t;
    }
    return params.sigma2 * std::exp(-0.5 * r2);
}

KernelFn make_gaussian_kernel(GaussianKernelParams params) {
    params.validate();
    return [params](const Point& a, const Point& b) { return gaussian_kernel(params, a, b); };
}

Matrix assemble_covariance(const KernelFn& kernel, std::span<const Point> points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    if (n < 1) throw DimensionError("covariance needs at least one point");
    Matrix c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            double v = kernel(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)]);
            if (!std::isfinite(v)) throw NumericalError("kernel returned a non-finite value");
            c(i, j) = v;
            c(j, i) = v;
        }
    }
    return c;
}

Vector covariance_vector(const KernelFn& kernel, std::span<const Point> points, const Point& xstar) {
    Vector c(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != xstar.size()) throw DimensionError("kernel dimension mismatch");
        c[static_cast<Eigen::Index>(i)] = kernel(points[i], xstar);
    }
    return c;
}

}  // namespace cophik
