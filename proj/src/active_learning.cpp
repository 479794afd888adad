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

#include "active_learning.hpp"

#include <algorithm>
#include <limits>

namespace cophik {

std::size_t argmax_mse(const Field& mse, const std::vector<std::size_t>& excluded) {
    std::vector<bool> skip(mse.size(), false);
    for (auto n : excluded)
        if (n < skip.size()) skip[n] = true;
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < mse.size(); ++i) {
        if (skip[i]) continue;
        if (!best || mse[i] > mse[*best]) best = i;
    }
    if (!best) throw ConfigError("every candidate node is already observed");
    return *best;
}

std::vector<std::pair<std::size_t, double>> LearningTrajectory::error_curve() const {
    std::vector<std::pair<std::size_t, double>> curve;
    if (failed && steps.empty() && !mean) return curve;
    curve.emplace_back(initial_count, initial_error);
    for (std::size_t k = 0; k < steps.size(); ++k) curve.emplace_back(initial_count + k + 1, steps[k].relative_error);
    return curve;
}

LearningTrajectory active_learn(const LearnerConfig& cfg, const Field& truth, std::shared_ptr<const Ensemble> ensemble,
                                const ObservationSet& initial, std::size_t n_max) {
    if (n_max < initial.size()) throw ConfigError("n_max is smaller than the initial observation count");
    const Grid& grid = truth.grid();
    LearningTrajectory traj;
    traj.kind = cfg.kind;
    traj.initial_count = initial.size();
    traj.observations = initial;

    // Nodes already observed; off-node locations exclude nothing.
    std::vector<std::size_t> observed;
    for (const auto& x : initial.locations()) {
        double dist = 0.0;
        const std::size_t n = grid.nearest_node(x, &dist);
        if (dist <= 1e-12 * (1.0 + x.norm())) observed.push_back(n);
    }

    auto fit = [&]() -> std::optional<std::pair<Field, Field>> {
        try {
            return fit_learner(cfg, grid, ensemble, traj.observations)->predict_grid();
        } catch (const NumericalError& e) {
            traj.failed = true;
            traj.failure = e.what();
            return std::nullopt;
        }
    };

    auto fields = fit();
    if (!fields) {
        traj.initial_error = std::numeric_limits<double>::quiet_NaN();
        return traj;
    }
    traj.initial_error = relative_error(fields->first, truth);
    while (traj.observations.size() < n_max) {
        LearningStep step;
        step.node = argmax_mse(fields->second, observed);
        step.max_mse = fields->second[step.node];
        step.value = truth[step.node];
        const ObservationSet before = traj.observations;
        traj.observations = before.appended(grid.node(step.node), step.value);
        traj.mean = std::move(fields->first);
        traj.variance = std::move(fields->second);
        fields = fit();
        if (!fields) {
            traj.observations = before;
            return traj;
        }
        observed.push_back(step.node);
        step.relative_error = relative_error(fields->first, truth);
        traj.steps.push_back(step);
    }
    traj.mean = std::move(fields->first);
    traj.variance = std::move(fields->second);
    return traj;
}

LearningTrajectory active_learn(const LearnerConfig& cfg, const Field& truth, std::shared_ptr<const Ensemble> ensemble,
                                const NodeObservations& initial, std::size_t n_max) {
    return active_learn(cfg, truth, std::move(ensemble), initial.to_points(truth.grid()), n_max);
}

}  // namespace cophik
