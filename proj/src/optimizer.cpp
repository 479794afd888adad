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

#include "optimizer.hpp"

#include <algorithm>
#include <numeric>

namespace cophik {

namespace {

Vector clamp(const Vector& x, const Box& box) { return x.cwiseMax(box.lower).cwiseMin(box.upper); }

}  // namespace

SimplexResult nelder_mead(const std::function<double(const Vector&)>& f, const Vector& start, const Box& box,
                          double tolerance, int max_iterations) {
    const auto n = start.size();
    std::vector<Vector> pts;
    std::vector<double> vals;
    pts.push_back(clamp(start, box));
    for (Eigen::Index k = 0; k < n; ++k) {
        Vector p = pts.front();
        double step = 0.1 * (box.upper[k] - box.lower[k]);
        p[k] = (p[k] + step <= box.upper[k]) ? p[k] + step : p[k] - step;
        pts.push_back(clamp(p, box));
    }
    for (const auto& p : pts) vals.push_back(f(p));

    std::vector<std::size_t> order(pts.size());
    SimplexResult res;
    for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
        std::vector<Vector> sp;
        std::vector<double> sv;
        for (auto i : order) {
            sp.push_back(pts[i]);
            sv.push_back(vals[i]);
        }
        pts = std::move(sp);
        vals = std::move(sv);
        if (vals.back() - vals.front() <= tolerance) {
            res.converged = true;
            break;
        }

        Vector centroid = Vector::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) centroid += pts[static_cast<std::size_t>(i)];
        centroid /= static_cast<double>(n);
        const auto worst = static_cast<std::size_t>(n);

        Vector xr = clamp(centroid + (centroid - pts[worst]), box);
        double fr = f(xr);
        if (fr < vals.front()) {
            Vector xe = clamp(centroid + 2.0 * (centroid - pts[worst]), box);
            double fe = f(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[worst - 1]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        Vector xc = (fr < vals[worst]) ? Vector(clamp(centroid + 0.5 * (xr - centroid), box))
                                       : Vector(clamp(centroid + 0.5 * (pts[worst] - centroid), box));
        double fc = f(xc);
        if (fc < std::min(fr, vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 1; i < pts.size(); ++i) {
            pts[i] = clamp(pts.front() + 0.5 * (pts[i] - pts.front()), box);
            vals[i] = f(pts[i]);
        }
    }
    auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    res.x = pts[best];
    res.value = vals[best];
    return res;
}

std::vector<Vector> latin_hypercube(const Box& box, int count, Rng& rng) {
    const auto d = box.lower.size();
    std::vector<Vector> pts(static_cast<std::size_t>(count), Vector(d));
    for (Eigen::Index k = 0; k < d; ++k) {
        std::vector<int> strata(static_cast<std::size_t>(count));
        std::iota(strata.begin(), strata.end(), 0);
        for (std::size_t i = strata.size(); i > 1; --i) std::swap(strata[i - 1], strata[rng.below(i)]);
        for (int i = 0; i < count; ++i) {
            double u = (strata[static_cast<std::size_t>(i)] + rng.uniform()) / count;
            pts[static_cast<std::size_t>(i)][k] = box.lower[k] + u * (box.upper[k] - box.lower[k]);
        }
    }
    return pts;
}

}  // namespace cophik
