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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "learner.hpp"

namespace cophik {

namespace branin {

inline constexpr double kA = 1.0;
inline constexpr double kB = 5.1 / (4.0 * 3.14159265358979323846 * 3.14159265358979323846);
inline constexpr double kC = 5.0 / 3.14159265358979323846;
inline constexpr double kR = 6.0;
inline constexpr double kG = 10.0;
inline constexpr double kP = 1.0 / (8.0 * 3.14159265358979323846);
inline constexpr double kQ = 5.0;
/// Replaces the constant additive g in the stochastic model.
inline constexpr double kGHat = 20.0;
inline constexpr std::size_t kDraws = 12;

using Draws = std::array<double, kDraws>;

/// Reference function on [0,1]^2.
double reference(double x, double y);
/// Stochastic-model realization with standard-normal draws xi_1..xi_12.
double realization(double x, double y, const Draws& xi);
/// Random coefficient fields of the stochastic model.
double b_hat(double x, double y, const Draws& xi);
double q_hat(double x, double y, const Draws& xi);

}  // namespace branin

/// The 2-D benchmark grid; [0,1]^2 with `n` nodes per axis.
Grid branin_grid(std::size_t n = 41);

Field branin_reference(const Grid& grid);
Field branin_realization(const Grid& grid, std::span<const double> xi);

/// M realizations; member m draws its 12 normals from substream m of `seed`.
Ensemble generate_ensemble(const Grid& grid, std::size_t members, std::uint64_t seed);

/// `count` distinct nodes drawn uniformly with a seeded stream.
std::vector<std::size_t> sample_nodes(const Grid& grid, std::size_t count, std::uint64_t seed);

NodeObservations observe(const Field& truth, std::vector<std::size_t> nodes);

}  // namespace cophik
