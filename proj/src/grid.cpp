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

#include "grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "text.hpp"

namespace cophik {

double Axis::node(std::size_t i) const {
    if (i + 1 == count) return upper;
    return lower + static_cast<double>(i) * step();
}

Grid::Grid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    if (axes_.empty()) throw DimensionError("grid needs at least one axis");
    node_count_ = 1;
    for (const auto& a : axes_) {
        if (!(a.lower < a.upper)) throw ConfigError("grid axis needs lower < upper");
        if (a.count < 2) throw ConfigError("grid axis needs at least 2 nodes");
        node_count_ *= a.count;
    }
}

Grid Grid::unit(std::size_t dim, std::size_t n) {
    return Grid(std::vector<Axis>(dim, Axis{0.0, 1.0, n}));
}

Grid Grid::parse(const std::string& spec) {
    std::vector<Axis> axes;
    for (const auto& part : split(spec, ',')) {
        auto fields = split(part, ':');
        if (fields.size() != 3) throw ConfigError("grid axis '" + part + "' is not lower:upper:count");
        Axis a;
        a.lower = parse_double(fields[0]);
        a.upper = parse_double(fields[1]);
        a.count = static_cast<std::size_t>(parse_uint(fields[2]));
        axes.push_back(a);
    }
    return Grid(std::move(axes));
}

std::string Grid::spec() const {
    std::string out;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (k) out += ',';
        out += format_double(axes_[k].lower) + ':' + format_double(axes_[k].upper) + ':' +
               std::to_string(axes_[k].count);
    }
    return out;
}

std::vector<double> Grid::extents() const {
    std::vector<double> e;
    for (const auto& a : axes_) e.push_back(a.extent());
    return e;
}

std::vector<std::size_t> Grid::multi_index(std::size_t index) const {
    if (index >= node_count_) throw DimensionError("node index out of range");
    std::vector<std::size_t> m(axes_.size());
    for (std::size_t k = axes_.size(); k-- > 0;) {
        m[k] = index % axes_[k].count;
        index /= axes_[k].count;
    }
    return m;
}

std::size_t Grid::flat_index(std::span<const std::size_t> multi) const {
    if (multi.size() != axes_.size()) throw DimensionError("multi-index dimension mismatch");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (multi[k] >= axes_[k].count) throw DimensionError("multi-index out of range");
        idx = idx * axes_[k].count + multi[k];
    }
    return idx;
}

Point Grid::node(std::size_t index) const {
    auto m = multi_index(index);
    Point p(static_cast<Eigen::Index>(axes_.size()));
    for (std::size_t k = 0; k < axes_.size(); ++k) p[static_cast<Eigen::Index>(k)] = axes_[k].node(m[k]);
    return p;
}

bool Grid::contains(const Point& p, double tol) const {
    if (static_cast<std::size_t>(p.size()) != dim()) return false;
    for (std::size_t k = 0; k < dim(); ++k) {
        const auto& a = axes_[k];
        double slack = tol * a.extent();
        double v = p[static_cast<Eigen::Index>(k)];
        if (v < a.lower - slack || v > a.upper + slack) return false;
    }
    return true;
}

std::size_t Grid::nearest_node(const Point& p, double* distance) const {
    if (static_cast<std::size_t>(p.size()) != dim()) throw DimensionError("point dimension does not match grid");
    std::vector<std::size_t> m(dim());
    double d2 = 0.0;
    for (std::size_t k = 0; k < dim(); ++k) {
        const auto& a = axes_[k];
        double v = p[static_cast<Eigen::Index>(k)];
        double t = std::round((v - a.lower) / a.step());
        t = std::clamp(t, 0.0, static_cast<double>(a.count - 1));
        m[k] = static_cast<std::size_t>(t);
        double diff = v - a.node(m[k]);
        d2 += diff * diff;
    }
    if (distance) *distance = std::sqrt(d2);
    return flat_index(m);
}

std::size_t Grid::node_at(const Point& p) const {
    double dist = 0.0;
    std::size_t idx = nearest_node(p, &dist);
    double scale = 0.0;
    for (const auto& a : axes_) scale = std::max(scale, a.step());
    if (dist > 1e-9 * scale) throw DimensionError("observation location is not a grid node");
    return idx;
}

Field::Field(Grid grid, std::vector<double> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.node_count())
        throw DimensionError("field value count " + std::to_string(values_.size()) + " does not match grid node count " +
                             std::to_string(grid_.node_count()));
    for (double v : values_)
        if (!std::isfinite(v)) throw NumericalError("field contains a non-finite value");
}

ObservationSet::ObservationSet(std::vector<Point> locations, Vector values)
    : locations_(std::move(locations)), values_(std::move(values)) {
    if (locations_.empty()) throw DimensionError("observation set is empty");
    if (static_cast<std::size_t>(values_.size()) != locations_.size())
        throw DimensionError("observation locations and values differ in length");
    const auto d = locations_.front().size();
    if (d < 1) throw DimensionError("observation points need at least one coordinate");
    for (const auto& x : locations_)
        if (x.size() != d) throw DimensionError("observation points differ in dimension");
    for (std::size_t i = 0; i < locations_.size(); ++i) {
        if (!std::isfinite(values_[static_cast<Eigen::Index>(i)])) throw NumericalError("non-finite observation value");
        for (std::size_t j = 0; j < i; ++j)
            if (locations_[i] == locations_[j]) throw ConfigError("duplicate observation location");
    }
}

ObservationSet ObservationSet::appended(const Point& x, double y) const {
    auto locs = locations_;
    locs.push_back(x);
    Vector v(values_.size() + 1);
    v.head(values_.size()) = values_;
    v[values_.size()] = y;
    return ObservationSet(std::move(locs), std::move(v));
}

ObservationSet NodeObservations::to_points(const Grid& grid) const {
    std::vector<Point> locs;
    locs.reserve(nodes.size());
    for (auto n : nodes) locs.push_back(grid.node(n));
    return ObservationSet(std::move(locs), values);
}

NodeObservations on_nodes(const Grid& grid, const ObservationSet& obs) {
    if (obs.dim() != grid.dim()) throw DimensionError("observation dimension does not match grid");
    NodeObservations out;
    out.values = obs.values();
    for (const auto& x : obs.locations()) out.nodes.push_back(grid.node_at(x));
    return out;
}

SnapResult snap_to_nodes(const Grid& grid, const ObservationSet& obs) {
    if (obs.dim() != grid.dim()) throw DimensionError("observation dimension does not match grid");
    SnapResult r;
    r.obs.values = obs.values();
    std::set<std::size_t> seen;
    for (const auto& x : obs.locations()) {
        if (!grid.contains(x, 1e-9)) throw ConfigError("observation location lies outside the grid domain");
        double dist = 0.0;
        auto n = grid.nearest_node(x, &dist);
        if (!seen.insert(n).second) throw ConfigError("two observations snap to the same grid node");
        r.obs.nodes.push_back(n);
        r.distances.push_back(dist);
        r.max_distance = std::max(r.max_distance, dist);
    }
    return r;
}

double interpolate(const Grid& grid, std::span<const double> values, const Point& p) {
    if (values.size() != grid.node_count()) throw DimensionError("interpolation values do not match grid");
    if (static_cast<std::size_t>(p.size()) != grid.dim()) throw DimensionError("interpolation point dimension mismatch");
    const std::size_t d = grid.dim();
    std::vector<std::size_t> base(d);
    std::vector<double> frac(d);
    for (std::size_t k = 0; k < d; ++k) {
        const auto& a = grid.axis(k);
        double t = (p[static_cast<Eigen::Index>(k)] - a.lower) / a.step();
        t = std::clamp(t, 0.0, static_cast<double>(a.count - 1));
        auto i = std::min(static_cast<std::size_t>(std::floor(t)), a.count - 2);
        base[k] = i;
        frac[k] = t - static_cast<double>(i);
    }
    double sum = 0.0;
    std::vector<std::size_t> corner(d);
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
        double w = 1.0;
        for (std::size_t k = 0; k < d; ++k) {
            bool up = (mask >> k) & 1U;
            corner[k] = base[k] + (up ? 1 : 0);
            w *= up ? frac[k] : 1.0 - frac[k];
        }
        if (w != 0.0) sum += w * values[grid.flat_index(corner)];
    }
    return sum;
}

double relative_error(const Field& reconstructed, const Field& reference) {
    if (!(reconstructed.grid() == reference.grid())) throw DimensionError("relative error needs fields on one grid");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        double d = reconstructed[i] - reference[i];
        num += d * d;
        den += reference[i] * reference[i];
    }
    if (den == 0.0) throw NumericalError("reference field has zero norm");
    return std::sqrt(num) / std::sqrt(den);
}

}  // namespace cophik
