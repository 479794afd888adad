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

#include "learner.hpp"

namespace cophik {

/// Highest-MSE node outside `excluded`; ties go to the lowest node index.
std::size_t argmax_mse(const Field& mse, const std::vector<std::size_t>& excluded);

struct LearningStep {
    std::size_t node = 0;
    double value = 0.0;
    /// Max posterior variance of the fit that selected `node`.
    double max_mse = 0.0;
    /// Relative error of the refit that includes `node`.
    double relative_error = 0.0;
};

struct LearningTrajectory {
    LearnerKind kind = LearnerKind::OrdinaryKriging;
    std::size_t initial_count = 0;
    /// NaN when the initial fit failed.
    double initial_error = 0.0;
    std::vector<LearningStep> steps;
    ObservationSet observations;
    /// Posterior of the last successful fit.
    std::optional<Field> mean;
    std::optional<Field> variance;
    /// Set when a fit failed; steps hold everything completed before it.
    bool failed = false;
    std::string failure;

    /// (observation count, relative error) from the initial fit onward.
    std::vector<std::pair<std::size_t, double>> error_curve() const;
};

/// Greedy placement: fit, observe the truth at the MSE maximizer, repeat
/// until `n_max` observations.
LearningTrajectory active_learn(const LearnerConfig& cfg, const Field& truth, std::shared_ptr<const Ensemble> ensemble,
                                const ObservationSet& initial, std::size_t n_max);
LearningTrajectory active_learn(const LearnerConfig& cfg, const Field& truth, std::shared_ptr<const Ensemble> ensemble,
                                const NodeObservations& initial, std::size_t n_max);

}  // namespace cophik
