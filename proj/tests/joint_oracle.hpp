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

// Dense CoPhIK posterior: the full 2N x 2N joint system, solved directly.

#include "cophik.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace test {

/// Dense joint posterior assembled directly from the two-level model.
struct JointOracle {
    oracle::Members members;
    std::vector<cophik::Point> grid_nodes;
    std::vector<std::size_t> nodes;
    oracle::Vec y_low, y_high;
    long double rho, mu_d, sigma2_d;
    oracle::Vec lengths;

    long double kd(const cophik::Point& a, const cophik::Point& b) const {
        return oracle::gaussian(sigma2_d, lengths, to_oracle(a), to_oracle(b));
    }

    oracle::Mat joint_cov() const {
        const std::size_t n = nodes.size();
        oracle::Mat c = oracle::zeros(2 * n, 2 * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const long double c1 = oracle::ens_cov(members, nodes[i], nodes[j]);
                const long double c2 = kd(grid_nodes[nodes[i]], grid_nodes[nodes[j]]);
                c[i][j] = c1;
                c[i][n + j] = rho * c1;
                c[n + i][j] = rho * c1;
                c[n + i][n + j] = rho * rho * c1 + c2;
            }
        return c;
    }

    oracle::Vec joint_mean() const {
        oracle::Vec mu;
        for (auto k : nodes) mu.push_back(oracle::ens_mean(members, k));
        for (auto k : nodes) mu.push_back(rho * oracle::ens_mean(members, k) + mu_d);
        return mu;
    }

    oracle::Vec joint_y() const {
        oracle::Vec y = y_low;
        y.insert(y.end(), y_high.begin(), y_high.end());
        return y;
    }

    oracle::Posterior predict(std::size_t node) const {
        oracle::Vec c;
        for (auto k : nodes) c.push_back(rho * oracle::ens_cov(members, k, node));
        for (auto k : nodes) c.push_back(rho * rho * oracle::ens_cov(members, k, node) + kd(grid_nodes[k], grid_nodes[node]));
        const long double mu_star = rho * oracle::ens_mean(members, node) + mu_d;
        const long double var_star = rho * rho * oracle::ens_cov(members, node, node) + sigma2_d;
        return oracle::posterior(mu_star, var_star, joint_mean(), joint_cov(), c, joint_y());
    }
};

inline JointOracle make_oracle(const cophik::Ensemble& e, const cophik::CoPhikModel& m) {
    JointOracle o;
    o.members = to_members(e.data());
    for (std::size_t n = 0; n < e.grid().node_count(); ++n) o.grid_nodes.push_back(e.grid().node(n));
    o.nodes = m.observations().nodes;
    o.y_low = to_oracle(m.y_low());
    o.y_high = to_oracle(m.y_high());
    o.rho = m.rho();
    o.mu_d = m.mu_d();
    o.sigma2_d = m.d_params().sigma2;
    o.lengths = to_oracle(m.d_params().lengths);
    return o;
}

}  // namespace test
