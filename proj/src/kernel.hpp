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

#include <functional>
#include <span>

#include "common.hpp"

namespace cophik {

struct GaussianKernelParams {
    double sigma2 = 1.0;
    Vector lengths;

    void validate() const;
};

/// sigma2 * exp(-1/2 * sum_i ((x_i - x'_i) / l_i)^2)
double gaussian_kernel(const GaussianKernelParams& params, const Point& x, const Point& xp);

/// Unit-variance Gaussian correlation; `inv_lengths` holds 1/l_i.
double gaussian_correlation(const Vector& inv_lengths, const Point& x, const Point& xp);

using KernelFn = std::function<double(const Point&, const Point&)>;
using MeanFn = std::function<double(const Point&)>;

KernelFn make_gaussian_kernel(GaussianKernelParams params);

Matrix assemble_covariance(const KernelFn& kernel, std::span<const Point> points);
Vector covariance_vector(const KernelFn& kernel, std::span<const Point> points, const Point& xstar);

}  // namespace cophik
