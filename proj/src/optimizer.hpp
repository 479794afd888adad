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
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace cophik {

struct Box {
    Vector lower;
    Vector upper;
};

struct SimplexResult {
    Vector x;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Nelder-Mead minimization with trial points clamped into `box`.
/// Stops when the spread of simplex values drops below `tolerance` or after
/// `max_iterations` iterations.
SimplexResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& start, const Box& box,
                          double tolerance, int max_iterations);

/// `count` Latin-hypercube points in `box`.
std::vector<Vector> latin_hypercube(const Box& box, int count, Rng& rng);

}  // namespace cophik
