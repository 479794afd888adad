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

#include "branin.hpp"

#include <cmath>
#include <numbers>

#include "parallel.hpp"
#include "rng.hpp"

namespace cophik {

namespace branin {

namespace {

constexpr double kPi = std::numbers::pi;

double evaluate(double x, double y, double b, double g_add, double q) {
    const double xb = 15.0 * x - 5.0;
    const double yb = 15.0 * y;
    const double t = yb - b * xb * xb + kC * xb - kR;
    return kA * t * t + kG * (1.0 - kP) * std::cos(xb) + g_add + q * x;
}

}  // namespace

double reference(double x, double y) { return evaluate(x, y, kB, kG, kQ); }

double b_hat(double x, double y, const Draws& xi) {
    double s = 0.0;
    for (int i = 1; i <= 3; ++i) {
        s += std::sin((2 * i - 0.5) * kPi * x) * xi[2 * i - 2] / (4 * i - 1);
        s += std::sin((2 * i + 0.5) * kPi * y) * xi[2 * i - 1] / (4 * i + 1);
    }
    return kB * (0.9 + 0.2 / kPi * s);
}

double q_hat(double x, double y, const Draws& xi) {
    double s = 0.0;
    for (int i = 1; i <= 3; ++i) {
        s += std::cos((2 * i - 1.5) * kPi * x) * xi[2 * i + 4] / (4 * i - 3);
        s += std::cos((2 * i - 0.5) * kPi * y) * xi[2 * i + 5] / (4 * i - 1);
    }
    return kQ * (1.0 + 0.6 / kPi * s);
}

double realization(double x, double y, const Draws& xi) {
    return evaluate(x, y, b_hat(x, y, xi), kGHat, q_hat(x, y, xi));
}

}  // namespace branin

Grid branin_grid(std::size_t n) { return Grid::unit(2, n); }

namespace {

void require_2d(const Grid& grid) {
    if (grid.dim() != 2) throw DimensionError("the benchmark function is defined on a 2-D grid");
}

}  // namespace

Field branin_reference(const Grid& grid) {
    require_2d(grid);
    std::vector<double> v(grid.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Point p = grid.node(i);
        v[i] = branin::reference(p[0], p[1]);
    }
    return Field(grid, std::move(v));
}

Field branin_realization(const Grid& grid, std::span<const double> xi) {
    require_2d(grid);
    if (xi.size() != branin::kDraws) throw DimensionError("a realization needs exactly 12 draws");
    branin::Draws d;
    std::copy(xi.begin(), xi.end(), d.begin());
    std::vector<double> v(grid.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) {
        Point p = grid.node(i);
        v[i] = branin::realization(p[0], p[1], d);
    }
    return Field(grid, std::move(v));
}

Ensemble generate_ensemble(const Grid& grid, std::size_t members, std::uint64_t seed) {
    require_2d(grid);
    if (members == 0) throw ConfigError("ensemble size must be positive");
    Matrix data(static_cast<Eigen::Index>(members), static_cast<Eigen::Index>(grid.node_count()));
    parallel_for(members, [&](std::size_t m) {
        Rng rng(substream_seed(seed, m));
        std::array<double, branin::kDraws> xi;
        for (auto& v : xi) v = rng.normal();
        Field f = branin_realization(grid, xi);
        data.row(static_cast<Eigen::Index>(m)) = f.as_vector().transpose();
    });
    return Ensemble(grid, std::move(data));
}

std::vector<std::size_t> sample_nodes(const Grid& grid, std::size_t count, std::uint64_t seed) {
    const std::size_t n = grid.node_count();
    if (count > n) throw ConfigError("more observation nodes requested than the grid has");
    // Partial Fisher-Yates: the first `count` entries are a uniform draw without replacement.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        auto j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(count);
    return idx;
}

NodeObservations observe(const Field& truth, std::vector<std::size_t> nodes) {
    NodeObservations obs;
    obs.values.resize(static_cast<Eigen::Index>(nodes.size()));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] >= truth.size()) throw DimensionError("observation node out of range");
        obs.values[static_cast<Eigen::Index>(i)] = truth[nodes[i]];
    }
    obs.nodes = std::move(nodes);
    return obs;
}

}  // namespace cophik
