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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"

namespace cophik {

struct Axis {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t count = 2;

    double extent() const { return upper - lower; }
    double step() const { return extent() / static_cast<double>(count - 1); }
    double node(std::size_t i) const;

    bool operator==(const Axis&) const = default;
};

/// Structured rectangular grid over a box. Nodes are numbered row-major in
/// declared axis order: the first axis varies slowest, the last fastest.
class Grid {
public:
    Grid() = default;
    explicit Grid(std::vector<Axis> axes);

    /// Uniform grid on [0,1]^dim with `n` nodes per axis.
    static Grid unit(std::size_t dim, std::size_t n);

    /// Parses "l1:u1:n1,l2:u2:n2,...".
    static Grid parse(const std::string& spec);
    std::string spec() const;

    std::size_t dim() const { return axes_.size(); }
    std::size_t node_count() const { return node_count_; }
    const std::vector<Axis>& axes() const { return axes_; }
    const Axis& axis(std::size_t k) const { return axes_.at(k); }
    std::vector<double> extents() const;

    Point node(std::size_t index) const;
    std::vector<std::size_t> multi_index(std::size_t index) const;
    std::size_t flat_index(std::span<const std::size_t> multi) const;

    bool contains(const Point& p, double tol = 1e-12) const;

    /// Nearest node; writes the Euclidean snap distance when `distance` is set.
    std::size_t nearest_node(const Point& p, double* distance = nullptr) const;

    /// Node whose coordinates coincide with `p` up to a small relative
    /// tolerance; throws DimensionError otherwise.
    std::size_t node_at(const Point& p) const;

    bool operator==(const Grid& other) const { return axes_ == other.axes_; }

private:
    std::vector<Axis> axes_;
    std::size_t node_count_ = 0;
};

/// Scalar values of a state at every node of a grid.
class Field {
public:
    Field() = default;
    Field(Grid grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    Eigen::Map<const Vector> as_vector() const {
        return {values_.data(), static_cast<Eigen::Index>(values_.size())};
    }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// N locations with noiseless observed values.
class ObservationSet {
public:
    ObservationSet() = default;
    ObservationSet(std::vector<Point> locations, Vector values);

    std::size_t size() const { return locations_.size(); }
    std::size_t dim() const { return locations_.empty() ? 0 : static_cast<std::size_t>(locations_.front().size()); }
    const std::vector<Point>& locations() const { return locations_; }
    const Point& location(std::size_t i) const { return locations_[i]; }
    const Vector& values() const { return values_; }

    ObservationSet appended(const Point& x, double y) const;

private:
    std::vector<Point> locations_;
    Vector values_;
};

/// Observations that sit exactly on grid nodes.
struct NodeObservations {
    std::vector<std::size_t> nodes;
    Vector values;

    std::size_t size() const { return nodes.size(); }
    ObservationSet to_points(const Grid& grid) const;
};

/// Maps each location to the node it coincides with; throws if any is off-grid.
NodeObservations on_nodes(const Grid& grid, const ObservationSet& obs);

struct SnapResult {
    NodeObservations obs;
    std::vector<double> distances;
    double max_distance = 0.0;
};

/// Nearest-node snapping. Two locations snapping to one node is an error.
SnapResult snap_to_nodes(const Grid& grid, const ObservationSet& obs);

/// Multilinear interpolation of node values at `p` (clamped into the box).
double interpolate(const Grid& grid, std::span<const double> values, const Point& p);

/// ||Fr - F||_F / ||F||_F over all nodes.
double relative_error(const Field& reconstructed, const Field& reference);

}  // namespace cophik
