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

#include <cmath>
#include <random>
#include <vector>

#include "common.hpp"
#include "grid.hpp"
#include "oracle.hpp"

namespace test {

inline oracle::Vec to_oracle(const cophik::Vector& v) { return oracle::Vec(v.data(), v.data() + v.size()); }

inline oracle::Mat to_oracle(const cophik::Matrix& m) {
    oracle::Mat r = oracle::zeros(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) r[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    return r;
}

inline cophik::Point point(std::initializer_list<double> xs) {
    cophik::Point p(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

/// |a - b| <= rel * max(|b|, floor)
inline bool rel_close(long double a, long double b, long double rel, long double floor = 1.0L) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(b), floor);
}

inline cophik::Matrix random_spd(std::size_t n, std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    cophik::Matrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = nd(gen);
    cophik::Matrix s = a * a.transpose();
    s.diagonal().array() += static_cast<double>(n);
    return s;
}

/// Members as rows, drawn iid normal around a smooth base.
inline cophik::Matrix random_members(std::size_t members, std::size_t nodes, std::mt19937_64& gen, double scale = 1.0) {
    std::normal_distribution<double> nd;
    cophik::Matrix m(static_cast<Eigen::Index>(members), static_cast<Eigen::Index>(nodes));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = 3.0 + std::sin(0.7 * static_cast<double>(c)) + scale * nd(gen);
    return m;
}

inline oracle::Members to_members(const cophik::Matrix& m) {
    oracle::Members out;
    for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_oracle(cophik::Vector(m.row(r).transpose())));
    return out;
}

}  // namespace test
