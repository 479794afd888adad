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

#include "gp.hpp"

#include <algorithm>

namespace cophik {

Prediction make_prediction(double mean, double raw_variance) {
    return Prediction{mean, std::max(raw_variance, 0.0), raw_variance};
}

GpRegressor::GpRegressor(MeanFn mean, KernelFn kernel, ObservationSet obs, const NuggetPolicy& policy)
    : mean_(std::move(mean)), kernel_(std::move(kernel)), obs_(std::move(obs)) {
    const auto n = static_cast<Eigen::Index>(obs_.size());
    prior_mean_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) prior_mean_[i] = mean_(obs_.location(static_cast<std::size_t>(i)));
    fact_ = spd_factorize(assemble_covariance(kernel_, obs_.locations()), policy);
    weights_ = fact_.solve(obs_.values() - prior_mean_);
}

Prediction GpRegressor::predict(const Point& xstar) const {
    if (static_cast<std::size_t>(xstar.size()) != obs_.dim()) throw DimensionError("prediction point dimension mismatch");
    Vector c = covariance_vector(kernel_, obs_.locations(), xstar);
    double mean = mean_(xstar) + c.dot(weights_);
    double var = kernel_(xstar, xstar) - fact_.quad_form(c);
    return make_prediction(mean, var);
}

double GpRegressor::log_likelihood() const { return log_marginal_likelihood(obs_.values(), prior_mean_, fact_); }

Prediction gp_posterior(const MeanFn& mean, const KernelFn& kernel, const ObservationSet& obs, const Point& xstar,
                        const NuggetPolicy& policy) {
    return GpRegressor(mean, kernel, obs, policy).predict(xstar);
}

}  // namespace cophik
