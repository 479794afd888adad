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

#include <cstdint>
#include <vector>

#include "active_learning.hpp"
#include "branin.hpp"
#include "config.hpp"

namespace cophik {

/// Substream index (of the run seed) that draws the initial observation
/// nodes; ensemble members use indices 0..M-1.
inline constexpr std::uint64_t kObservationStream = 1ULL << 63;

struct BenchmarkConfig {
    std::size_t grid_nodes = 41;
    std::size_t members = 300;
    std::size_t initial_observations = 8;
    std::size_t n_max = 24;
    std::uint64_t seed = 1;
    std::vector<LearnerKind> learners{LearnerKind::OrdinaryKriging, LearnerKind::Phik, LearnerKind::ModifiedPhik,
                                      LearnerKind::Cophik};
    /// Optimizer, nugget and rho settings shared by all learners.
    RunConfig settings;

    static BenchmarkConfig from_run_config(const RunConfig& rc);
};

struct BenchmarkRun {
    Field reference;
    std::shared_ptr<const Ensemble> ensemble;
    double ensemble_mean_error = 0.0;
    std::vector<std::size_t> initial_nodes;
    std::vector<LearningTrajectory> trajectories;  // one per configured learner
};

/// Reference field, seeded ensemble and initial nodes, then active learning
/// to n_max for every learner.
BenchmarkRun run_benchmark(const BenchmarkConfig& cfg);

}  // namespace cophik
