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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "kriging.hpp"
#include "support.hpp"

using namespace cophik;
using test::point;

namespace {

ObservationSet smooth_2d(int n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> xs;
    Vector y(n);
    for (int i = 0; i < n; ++i) {
        xs.push_back(point({u(gen), u(gen)}));
        y[i] = std::sin(3.0 * xs.back()[0]) + std::cos(2.0 * xs.back()[1]) + xs.back()[0] * xs.back()[1];
    }
    return {xs, y};
}

OptimizerConfig quick_optimizer(std::uint64_t seed = 1) {
    OptimizerConfig c;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_SUITE("kriging") {

TEST_CASE("mle_mean_variance: identity correlation reduces to sample formulas") {
    const auto psi = spd_factorize(Matrix::Identity(4, 4));
    Vector c = Vector::Constant(4, 2.5);
    auto e = mle_mean_variance(psi, c);
    CHECK(e.mu == doctest::Approx(2.5));
    CHECK(e.sigma2 == doctest::Approx(0.0).scale(1e-15));

    Vector y(4);
    y << 1.0, 4.0, -2.0, 3.0;
    e = mle_mean_variance(psi, y);
    const double mean = 1.5;
    double pop = 0.0;
    for (double v : y) pop += (v - mean) * (v - mean);
    pop /= 4.0;
    CHECK(e.mu == doctest::Approx(mean).epsilon(1e-14));
    CHECK(e.sigma2 == doctest::Approx(pop).epsilon(1e-14));
}

TEST_CASE("mle_mean_variance: 2x2 correlation exact values") {
    Matrix psi(2, 2);
    psi << 1.0, 0.5, 0.5, 1.0;
    Vector y(2);
    y << 0.0, 1.0;
    // Psi^{-1} = 4/3 [[1,-1/2],[-1/2,1]] gives mu = 1/2 and sigma2 = 1/2.
    const auto e = mle_mean_variance(spd_factorize(psi), y);
    CHECK(e.mu == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.sigma2 == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("ordinary Kriging prediction") {
    const auto obs = smooth_2d(7, 21);
    const OrdinaryKriging m(obs, point({0.35, 0.5}));

    SUBCASE("interpolates observations") {
        REQUIRE(m.psi().nugget() == 0.0);
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const auto p = m.predict(obs.location(i));
            CHECK(test::rel_close(p.mean, obs.values()[static_cast<Eigen::Index>(i)], 1e-8L));
            CHECK(p.variance <= 1e-8 * m.sigma2_hat());
        }
    }
    SUBCASE("far from data returns (mu_hat, sigma2_hat)") {
        const auto p = m.predict(point({50.0, -40.0}));
        CHECK(p.mean == doctest::Approx(m.mu_hat()).epsilon(1e-14));
        CHECK(p.variance == doctest::Approx(m.sigma2_hat()).epsilon(1e-14));
    }
    SUBCASE("equals generic GP posterior with constant mean and scaled correlation") {
        const double s2 = m.sigma2_hat();
        const auto kernel = make_gaussian_kernel({s2, m.lengths()});
        const double mu = m.mu_hat();
        GpRegressor gp([mu](const Point&) { return mu; }, kernel, obs);
        std::mt19937_64 gen(4);
        std::uniform_real_distribution<double> u(-0.2, 1.2);
        for (int t = 0; t < 100; ++t) {
            const Point x = point({u(gen), u(gen)});
            const auto a = m.predict(x), b = gp.predict(x);
            CHECK(std::fabs(a.mean - b.mean) <= 1e-10 * std::max(1.0, std::fabs(b.mean)));
            CHECK(std::fabs(a.variance - b.variance) <= 1e-10 * std::max(1.0, s2));
        }
    }
    SUBCASE("posterior variance never exceeds sigma2_hat") {
        std::mt19937_64 gen(9);
        std::uniform_real_distribution<double> u(-1.0, 2.0);
        for (int t = 0; t < 300; ++t) CHECK(m.predict(point({u(gen), u(gen)})).variance <= m.sigma2_hat() * (1.0 + 1e-12));
    }
    SUBCASE("translation equivariance") {
        const Point shift = point({3.7, -1.25});
        std::vector<Point> moved;
        for (const auto& x : obs.locations()) moved.push_back(x + shift);
        const OrdinaryKriging mt(ObservationSet(moved, obs.values()), m.lengths());
        std::mt19937_64 gen(10);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int t = 0; t < 50; ++t) {
            const Point x = point({u(gen), u(gen)});
            const auto a = m.predict(x), b = mt.predict(x + shift);
            CHECK(std::fabs(a.mean - b.mean) <= 1e-10 * std::max(1.0, std::fabs(a.mean)));
            CHECK(std::fabs(a.variance - b.variance) <= 1e-10 * std::max(1.0, m.sigma2_hat()));
        }
    }
}

TEST_CASE("fit_hyperparameters: returned likelihood dominates every start and evaluation") {
    const auto obs = smooth_2d(9, 33);
    FitTrace trace;
    const std::vector<double> extents{1.0, 1.0};
    const auto m = fit_hyperparameters(obs, extents, quick_optimizer(), {}, &trace);
    REQUIRE(trace.start_values.size() == 10);
    for (double v : trace.start_values) CHECK(m.log_likelihood() >= v);
    REQUIRE(!trace.evaluated_values.empty());
    for (double v : trace.evaluated_values) CHECK(m.log_likelihood() >= v - 1e-9 * std::fabs(v));
    const Box box = quick_optimizer().log_bounds(extents);
    for (Eigen::Index i = 0; i < 2; ++i) {
        CHECK(std::log(m.lengths()[i]) >= box.lower[i] - 1e-12);
        CHECK(std::log(m.lengths()[i]) <= box.upper[i] + 1e-12);
    }
    CHECK(m.sigma2_hat() >= 0.0);
}

TEST_CASE("fit_hyperparameters: identical values give the zero-variance path") {
    ObservationSet obs({point({0.2}), point({0.8})}, test::point({3.0, 3.0}));
    const std::vector<double> extents{1.0};
    const auto m = fit_hyperparameters(obs, extents, quick_optimizer());
    CHECK(std::isfinite(m.log_likelihood()));
    CHECK(m.sigma2_hat() == doctest::Approx(0.0).scale(1e-12));
    const auto p = m.predict(point({0.5}));
    CHECK(p.mean == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(p.variance == doctest::Approx(0.0).scale(1e-12));
}

TEST_CASE("fit_hyperparameters: single observation gives a constant mean") {
    ObservationSet obs({point({0.4, 0.6})}, test::point({-1.75}));
    const std::vector<double> extents{1.0, 1.0};
    const auto m = fit_hyperparameters(obs, extents, quick_optimizer());
    CHECK(m.mu_hat() == -1.75);
    for (double x : {0.0, 0.3, 0.9}) CHECK(m.predict(point({x, 1.0 - x})).mean == doctest::Approx(-1.75).epsilon(1e-15));
}

TEST_CASE("fit_hyperparameters: deterministic for a fixed seed") {
    const auto obs = smooth_2d(8, 4);
    const std::vector<double> extents{1.0, 1.0};
    const auto a = fit_hyperparameters(obs, extents, quick_optimizer(77));
    const auto b = fit_hyperparameters(obs, extents, quick_optimizer(77));
    CHECK(a.lengths() == b.lengths());
    CHECK(a.log_likelihood() == b.log_likelihood());
}

TEST_CASE("fit_hyperparameters: recovers a planted length scale within a factor of 3 (median of 20 draws)") {
    // 5 points on [0,1] drawn from a zero-mean unit-variance GP with l = 0.3,
    // sampled through a hand-written long-double Cholesky factor.
    const double true_l = 0.3;
    std::vector<double> recovered;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        std::mt19937_64 gen(seed);
        std::normal_distribution<double> nd;
        std::vector<Point> xs;
        for (int i = 0; i < 5; ++i) xs.push_back(point({0.25 * i}));
        oracle::Mat c = oracle::zeros(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) c[i][j] = oracle::gaussian(1.0L, {true_l}, test::to_oracle(xs[i]), test::to_oracle(xs[j]));
        oracle::Mat l = oracle::zeros(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                long double s = c[i][j];
                for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
                l[i][j] = (i == j) ? std::sqrt(s) : s / l[j][j];
            }
        oracle::Vec z(5);
        for (auto& v : z) v = nd(gen);
        Vector y(5);
        for (std::size_t i = 0; i < 5; ++i) {
            long double s = 0.0L;
            for (std::size_t k = 0; k <= i; ++k) s += l[i][k] * z[k];
            y[static_cast<Eigen::Index>(i)] = static_cast<double>(s);
        }
        const std::vector<double> extents{1.0};
        recovered.push_back(fit_hyperparameters(ObservationSet(xs, y), extents, quick_optimizer(seed)).lengths()[0]);
    }
    std::sort(recovered.begin(), recovered.end());
    const double median = 0.5 * (recovered[9] + recovered[10]);
    MESSAGE("median recovered length " << median);
    CHECK(median >= true_l / 3.0);
    CHECK(median <= true_l * 3.0);
}

TEST_CASE("optimizer configuration validation") {
    OptimizerConfig c;
    c.starts = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.lower_factor = 2.0;
    c.upper_factor = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.lower_factor = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("nelder_mead stays in the box and finds a quadratic minimum") {
    Box box{point({-1.0, -1.0}), point({1.0, 1.0})};
    auto f = [](const Vector& x) { return (x[0] - 0.3) * (x[0] - 0.3) + 2.0 * (x[1] + 0.4) * (x[1] + 0.4); };
    const auto r = nelder_mead(f, point({0.9, 0.9}), box, 1e-14, 2000);
    CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(-0.4).epsilon(1e-5));
    auto g = [](const Vector& x) { return x[0] + x[1]; };
    const auto rb = nelder_mead(g, point({0.0, 0.0}), box, 1e-14, 2000);
    CHECK(rb.x[0] >= -1.0);
    CHECK(rb.x[1] >= -1.0);
    CHECK(rb.value == doctest::Approx(-2.0).epsilon(1e-6));
}

TEST_CASE("latin hypercube covers each stratum once per axis") {
    Rng rng(3);
    Box box{point({0.0, 10.0}), point({1.0, 20.0})};
    const auto pts = latin_hypercube(box, 8, rng);
    REQUIRE(pts.size() == 8);
    for (int axis = 0; axis < 2; ++axis) {
        std::vector<int> hits(8, 0);
        for (const auto& p : pts) {
            const double t = (p[axis] - box.lower[axis]) / (box.upper[axis] - box.lower[axis]);
            hits[std::min(7, static_cast<int>(t * 8.0))]++;
        }
        for (int h : hits) CHECK(h == 1);
    }
}

}  // TEST_SUITE
