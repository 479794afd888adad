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

#include "grid.hpp"
#include "kernel.hpp"
#include "spd.hpp"

namespace cophik {

struct Prediction {
    double mean = 0.0;
    /// Clamped at zero.
    double variance = 0.0;
    /// Variance before clamping; may be slightly negative from rounding.
    double raw_variance = 0.0;
};

/// Clamps a posterior variance, keeping the raw value.
Prediction make_prediction(double mean, double raw_variance);

/// Generic GP posterior with an arbitrary mean function and kernel. The
/// covariance of the observations is factored once at construction.
class GpRegressor {
public:
    GpRegressor(MeanFn mean, KernelFn kernel, ObservationSet obs, const NuggetPolicy& policy = {});

    Prediction predict(const Point& xstar) const;

    const SpdFactorization& factorization() const { return fact_; }
    const Vector& weights() const { return weights_; }
    double log_likelihood() const;

private:
    MeanFn mean_;
    KernelFn kernel_;
    ObservationSet obs_;
    Vector prior_mean_;
    SpdFactorization fact_;
    Vector weights_;  // C^{-1}(y - mu)
};

/// One-shot posterior at a single point.
Prediction gp_posterior(const MeanFn& mean, const KernelFn& kernel, const ObservationSet& obs, const Point& xstar,
                        const NuggetPolicy& policy = {});

}  // namespace cophik
