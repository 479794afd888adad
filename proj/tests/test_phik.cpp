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

#include <cmath>
#include <random>

#include "doctest.h"
#include "phik.hpp"
#include "support.hpp"

using namespace cophik;

namespace {

Ensemble random_ensemble(const Grid& grid, std::size_t members, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    return Ensemble(grid, test::random_members(members, grid.node_count(), gen));
}

ObservationSet at_nodes(const Grid& grid, const std::vector<std::size_t>& nodes, const Vector& y) {
    std::vector<Point> xs;
    for (auto n : nodes) xs.push_back(grid.node(n));
    return {xs, y};
}

oracle::Vec oracle_mean_vec(const oracle::Members& m, const std::vector<std::size_t>& nodes) {
    oracle::Vec v;
    for (auto n : nodes) v.push_back(oracle::ens_mean(m, n));
    return v;
}

/// PhIK posterior at `node` from explicit ensemble statistics and a dense inverse.
oracle::Posterior phik_oracle(const oracle::Members& m, const std::vector<std::size_t>& nodes, const oracle::Vec& y,
                              std::size_t node, long double shift = 0.0L) {
    oracle::Vec mu = oracle_mean_vec(m, nodes);
    for (auto& v : mu) v += shift;
    oracle::Vec c;
    for (auto n : nodes) c.push_back(oracle::ens_cov(m, n, node));
    return oracle::posterior(oracle::ens_mean(m, node) + shift, oracle::ens_cov(m, node, node), mu,
                             oracle::ens_cov_matrix(m, nodes), c, y);
}

/// Multilinear interpolation from a coarse 2-D grid, written out explicitly.
long double bilinear(const Grid& coarse, const std::vector<double>& v, const Point& p) {
    const auto& ax = coarse.axis(0);
    const auto& ay = coarse.axis(1);
    auto locate = [](const Axis& a, double x, std::size_t& i, long double& t) {
        const long double s = (x - a.lower) / a.step();
        i = std::min<std::size_t>(static_cast<std::size_t>(s), a.count - 2);
        t = s - static_cast<long double>(i);
    };
    std::size_t i, j;
    long double tx, ty;
    locate(ax, p[0], i, tx);
    locate(ay, p[1], j, ty);
    auto at = [&](std::size_t a, std::size_t b) { return static_cast<long double>(v[a * ay.count + b]); };
    return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) + (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
}

}  // namespace

TEST_SUITE("phik") {

TEST_CASE("ensemble_mean_cov: identical members") {
    const Grid g = Grid::unit(1, 4);
    Matrix m(3, 4);
    for (int r = 0; r < 3; ++r) m.row(r) << 1.0, -2.0, 0.5, 7.0;
    const Ensemble e(g, m);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            const auto s = ensemble_mean_cov(e, i, j);
            CHECK(s.mean == m(0, static_cast<Eigen::Index>(i)));
            CHECK(s.cov == 0.0);
        }
}

TEST_CASE("ensemble_mean_cov: two members mu +- v give cov 2 v v'") {
    const Grid g = Grid::unit(1, 3);
    Vector mu(3), v(3);
    mu << 1.0, 2.0, 3.0;
    v << 0.5, -0.25, 2.0;
    Matrix m(2, 3);
    m.row(0) = (mu + v).transpose();
    m.row(1) = (mu - v).transpose();
    const Ensemble e(g, m);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const auto s = ensemble_mean_cov(e, i, j);
            CHECK(s.mean == doctest::Approx(mu[static_cast<Eigen::Index>(i)]).epsilon(1e-15));
            CHECK(s.cov == doctest::Approx(2.0 * v[static_cast<Eigen::Index>(i)] * v[static_cast<Eigen::Index>(j)]).epsilon(1e-14));
        }
}

TEST_CASE("ensemble_mean_cov: random M=3 matches double loop") {
    const Grid g = Grid::unit(2, 3);
    const Ensemble e = random_ensemble(g, 3, 8);
    const auto om = test::to_members(e.data());
    for (std::size_t i = 0; i < g.node_count(); ++i)
        for (std::size_t j = 0; j < g.node_count(); ++j) {
            const auto s = ensemble_mean_cov(e, i, j);
            CHECK(std::fabs(s.mean - oracle::ens_mean(om, i)) <= 1e-12L);
            CHECK(std::fabs(s.cov - oracle::ens_cov(om, i, j)) <= 1e-12L);
        }
}

TEST_CASE("ensemble statistics need two members") {
    const Grid g = Grid::unit(1, 3);
    const Ensemble one(g, Matrix::Ones(1, 3));
    CHECK_THROWS_AS(ensemble_mean_cov(one, 0, 1), Error);
    CHECK_THROWS_AS(EnsembleGp::from_ensemble(one), Error);
}

TEST_CASE("ensemble_cov_matrix") {
    const Grid g = Grid::unit(2, 4);
    const Ensemble e = random_ensemble(g, 3, 12);
    const auto om = test::to_members(e.data());

    SUBCASE("N=1 is the node variance") {
        const Matrix c = ensemble_cov_matrix(e, at_nodes(g, {5}, test::point({0.0})));
        CHECK(c(0, 0) == doctest::Approx(static_cast<double>(oracle::ens_cov(om, 5, 5))).epsilon(1e-13));
    }
    SUBCASE("N=2, M=3 matches outer-product oracle") {
        const std::vector<std::size_t> nodes{2, 9};
        const Matrix c = ensemble_cov_matrix(e, at_nodes(g, nodes, test::point({0.0, 0.0})));
        const auto o = oracle::ens_cov_matrix(om, nodes);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::fabs(c(i, j) - o[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) <= 1e-12L);
    }
    SUBCASE("N > M-1 is singular and forces a nugget") {
        const std::vector<std::size_t> nodes{0, 3, 7, 12};
        const Matrix c = ensemble_cov_matrix(e, at_nodes(g, nodes, Vector::Zero(4)));
        CHECK(spd_factorize(c).nugget() > 0.0);
    }
    SUBCASE("off-grid observation is rejected") {
        ObservationSet off({test::point({0.1, 0.1})}, test::point({1.0}));
        CHECK_THROWS_AS(ensemble_cov_matrix(e, off), DimensionError);
    }
}

TEST_CASE("ensemble covariance is PSD") {
    const Grid g = Grid::unit(2, 5);
    const Ensemble e = random_ensemble(g, 6, 40);
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < g.node_count(); i += 2) nodes.push_back(i);
    Vector zeros = Vector::Zero(static_cast<Eigen::Index>(nodes.size()));
    const Matrix c = ensemble_cov_matrix(e, at_nodes(g, nodes, zeros));
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * c.trace() / static_cast<double>(nodes.size()));
}

TEST_CASE("PhIK prediction") {
    const Grid g = Grid::unit(2, 4);
    const Ensemble e = random_ensemble(g, 6, 2);
    const auto om = test::to_members(e.data());
    const std::vector<std::size_t> nodes{1, 6, 14};

    SUBCASE("y equal to the ensemble mean returns the mean everywhere") {
        Vector y(3);
        for (int i = 0; i < 3; ++i) y[i] = static_cast<double>(oracle::ens_mean(om, nodes[static_cast<std::size_t>(i)]));
        const auto obs = at_nodes(g, nodes, y);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            CHECK(phik_predict(e, obs, n).mean == doctest::Approx(static_cast<double>(oracle::ens_mean(om, n))).epsilon(1e-12));
    }
    SUBCASE("interpolates with nonsingular C_MC") {
        const Vector y = test::point({4.0, 1.5, 2.25});
        const auto obs = at_nodes(g, nodes, y);
        auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(e));
        PhikRegressor r(prior, on_nodes(g, obs));
        REQUIRE(r.factorization().nugget() == 0.0);
        for (int i = 0; i < 3; ++i) {
            const auto p = r.predict(nodes[static_cast<std::size_t>(i)]);
            CHECK(test::rel_close(p.mean, y[i], 1e-8L));
            CHECK(p.variance <= 1e-8 * prior->variance(nodes[static_cast<std::size_t>(i)]));
        }
    }
    SUBCASE("dense oracle, M=3 N=2") {
        const Ensemble e3 = random_ensemble(g, 3, 17);
        const auto o3 = test::to_members(e3.data());
        const std::vector<std::size_t> nn{3, 10};
        const Vector y = test::point({2.0, 4.5});
        const auto obs = at_nodes(g, nn, y);
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const auto p = phik_predict(e3, obs, n);
            const auto o = phik_oracle(o3, nn, test::to_oracle(y), n);
            CHECK(test::rel_close(p.mean, o.mean, 1e-8L));
            CHECK(std::fabs(p.variance - std::max(0.0L, o.variance)) <= 1e-8L * std::max(1.0L, oracle::ens_cov(o3, n, n)));
        }
    }
    SUBCASE("posterior variance bounded by the ensemble variance") {
        const auto obs = at_nodes(g, nodes, test::point({4.0, 1.5, 2.25}));
        auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(e));
        PhikRegressor r(prior, on_nodes(g, obs));
        for (std::size_t n = 0; n < g.node_count(); ++n) CHECK(r.predict(n).variance <= prior->variance(n) * (1.0 + 1e-12) + 1e-14);
    }
    SUBCASE("posterior mean is mu + sum a_i k(., x_i) with the stored coefficients") {
        const Vector y = test::point({4.0, 1.5, 2.25});
        auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(e));
        PhikRegressor r(prior, on_nodes(g, at_nodes(g, nodes, y)));
        const Vector a = r.coefficients();
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            long double s = oracle::ens_mean(om, n);
            for (std::size_t i = 0; i < nodes.size(); ++i) s += a[static_cast<Eigen::Index>(i)] * oracle::ens_cov(om, n, nodes[i]);
            CHECK(test::rel_close(r.predict(n).mean, s, 1e-10L));
        }
    }
}

TEST_CASE("modified PhIK delta mu") {
    std::mt19937_64 gen(31);
    const Matrix c = test::random_spd(3, gen);
    const auto f = spd_factorize(c);
    const Vector mu = test::point({1.0, -2.0, 0.5});
    CHECK(modified_phik_delta_mu(f, mu, mu) == 0.0);
    CHECK(modified_phik_delta_mu(f, (mu.array() + 3.25).matrix(), mu) == doctest::Approx(3.25).epsilon(1e-13));

    const Vector y = test::point({0.3, 4.0, -1.0});
    const auto inv = oracle::inverse(test::to_oracle(c));
    const oracle::Vec ones(3, 1.0L);
    const auto w = oracle::matvec(inv, ones);
    const long double want = oracle::dot(w, oracle::sub(test::to_oracle(y), test::to_oracle(mu))) / oracle::dot(w, ones);
    CHECK(test::rel_close(modified_phik_delta_mu(f, y, mu), want, 1e-12L));
}

TEST_CASE("modified PhIK prediction") {
    const Grid g = Grid::unit(2, 4);
    const Ensemble e = random_ensemble(g, 5, 23);
    const auto om = test::to_members(e.data());
    const std::vector<std::size_t> nodes{0, 9, 15};

    SUBCASE("pure shift is absorbed") {
        Vector y(3);
        for (int i = 0; i < 3; ++i) y[i] = static_cast<double>(oracle::ens_mean(om, nodes[static_cast<std::size_t>(i)])) + 1.75;
        const auto obs = at_nodes(g, nodes, y);
        for (std::size_t n = 0; n < g.node_count(); ++n)
            CHECK(modified_phik_predict(e, obs, n).mean ==
                  doctest::Approx(static_cast<double>(oracle::ens_mean(om, n)) + 1.75).epsilon(1e-11));
    }
    SUBCASE("balanced residual reduces to PhIK") {
        // Choose y - mu orthogonal to C^{-1} 1 so the shift vanishes.
        auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(e));
        const Matrix c = prior->cov_matrix(nodes);
        const auto f = spd_factorize(c);
        const Vector w = f.solve(Vector::Ones(3));
        Vector r = test::point({1.0, -0.5, 0.25});
        r -= (w.dot(r) / w.squaredNorm()) * w;
        const Vector y = prior->mean_at(nodes) + r;
        const auto obs = at_nodes(g, nodes, y);
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const auto a = modified_phik_predict(e, obs, n), b = phik_predict(e, obs, n);
            CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-10));
            CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-10));
        }
    }
    SUBCASE("tiny case matches dense oracle and likelihood does not decrease") {
        const Vector y = test::point({5.0, 2.0, 3.5});
        const auto obs = at_nodes(g, nodes, y);
        const auto inv = oracle::inverse(oracle::ens_cov_matrix(om, nodes));
        const oracle::Vec ones(3, 1.0L);
        const auto w = oracle::matvec(inv, ones);
        const long double dmu = oracle::dot(w, oracle::sub(test::to_oracle(y), oracle_mean_vec(om, nodes))) / oracle::dot(w, ones);
        for (std::size_t n = 0; n < g.node_count(); ++n) {
            const auto p = modified_phik_predict(e, obs, n);
            const auto o = phik_oracle(om, nodes, test::to_oracle(y), n, dmu);
            CHECK(test::rel_close(p.mean, o.mean, 1e-8L));
        }
        auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(e));
        const PhikRegressor plain(prior, on_nodes(g, obs), false), shifted(prior, on_nodes(g, obs), true);
        CHECK(shifted.log_likelihood() >= plain.log_likelihood());
        CHECK(shifted.delta_mu() == doctest::Approx(static_cast<double>(dmu)).epsilon(1e-10));
    }
}

TEST_CASE("MLMC estimators") {
    const Grid coarse = Grid::unit(2, 3);
    const Grid fine = Grid::unit(2, 5);
    std::mt19937_64 gen(99);

    auto make = [&](std::size_t ml, std::size_t mh, double corr_scale) {
        TwoLevelEnsemble t;
        t.coarse = Ensemble(coarse, test::random_members(ml, coarse.node_count(), gen));
        t.coarse_paired = Ensemble(coarse, test::random_members(mh, coarse.node_count(), gen));
        Matrix f(static_cast<Eigen::Index>(mh), static_cast<Eigen::Index>(fine.node_count()));
        std::normal_distribution<double> nd;
        for (std::size_t m = 0; m < mh; ++m)
            for (std::size_t n = 0; n < fine.node_count(); ++n) {
                std::vector<double> cv(coarse.node_count());
                for (std::size_t k = 0; k < cv.size(); ++k) cv[k] = t.coarse_paired.value(m, k);
                f(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                    static_cast<double>(bilinear(coarse, cv, fine.node(n))) + corr_scale * nd(gen);
            }
        t.fine = Ensemble(fine, f);
        return t;
    };
    auto coarse_values = [&](const Ensemble& e, std::size_t m) {
        std::vector<double> v(coarse.node_count());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = e.value(m, k);
        return v;
    };

    SUBCASE("distinct levels match direct sums") {
        const auto t = make(5, 3, 0.3);
        for (std::size_t i = 0; i < fine.node_count(); i += 3) {
            long double a = 0.0L, b = 0.0L;
            for (std::size_t m = 0; m < 5; ++m) a += bilinear(coarse, coarse_values(t.coarse, m), fine.node(i));
            for (std::size_t m = 0; m < 3; ++m)
                b += t.fine.value(m, i) - bilinear(coarse, coarse_values(t.coarse_paired, m), fine.node(i));
            CHECK(std::fabs(mlmc_mean(t, i) - (a / 5.0L + b / 3.0L)) <= 1e-12L);
            for (std::size_t j = 0; j < fine.node_count(); j += 4) {
                oracle::Members lc, cc;
                for (std::size_t m = 0; m < 5; ++m)
                    lc.push_back({bilinear(coarse, coarse_values(t.coarse, m), fine.node(i)),
                                  bilinear(coarse, coarse_values(t.coarse, m), fine.node(j))});
                for (std::size_t m = 0; m < 3; ++m)
                    cc.push_back({t.fine.value(m, i) - bilinear(coarse, coarse_values(t.coarse_paired, m), fine.node(i)),
                                  t.fine.value(m, j) - bilinear(coarse, coarse_values(t.coarse_paired, m), fine.node(j))});
                CHECK(std::fabs(mlmc_cov(t, i, j) - (oracle::ens_cov(lc, 0, 1) + oracle::ens_cov(cc, 0, 1))) <= 1e-12L);
            }
        }
    }
    SUBCASE("zero correction leaves the coarse statistics") {
        const auto t = make(4, 3, 0.0);
        oracle::Members lc;
        for (std::size_t m = 0; m < 4; ++m) {
            oracle::Vec row;
            for (std::size_t n = 0; n < fine.node_count(); ++n) row.push_back(bilinear(coarse, coarse_values(t.coarse, m), fine.node(n)));
            lc.push_back(row);
        }
        for (std::size_t i = 0; i < fine.node_count(); i += 2) {
            CHECK(std::fabs(mlmc_mean(t, i) - oracle::ens_mean(lc, i)) <= 1e-12L);
            CHECK(std::fabs(mlmc_cov(t, i, 0) - oracle::ens_cov(lc, i, 0)) <= 1e-12L);
        }
    }
    SUBCASE("identical coarse members leave only the correction covariance") {
        auto t = make(4, 3, 0.5);
        Matrix same(4, static_cast<Eigen::Index>(coarse.node_count()));
        for (int r = 0; r < 4; ++r) same.row(r) = t.coarse.data().row(0);
        t.coarse = Ensemble(coarse, same);
        for (std::size_t i = 0; i < fine.node_count(); i += 5) {
            oracle::Members cc;
            for (std::size_t m = 0; m < 3; ++m)
                cc.push_back({t.fine.value(m, i) - bilinear(coarse, coarse_values(t.coarse_paired, m), fine.node(i)),
                              t.fine.value(m, 7) - bilinear(coarse, coarse_values(t.coarse_paired, m), fine.node(7))});
            CHECK(std::fabs(mlmc_cov(t, i, 7) - oracle::ens_cov(cc, 0, 1)) <= 1e-12L);
        }
    }
    SUBCASE("paired-identical levels on one grid reproduce single-level statistics") {
        const Ensemble base = random_ensemble(fine, 5, 123);
        TwoLevelEnsemble t{base, base, base};
        const auto om = test::to_members(base.data());
        for (std::size_t i = 0; i < fine.node_count(); ++i) {
            CHECK(std::fabs(mlmc_mean(t, i) - oracle::ens_mean(om, i)) <= 1e-12L);
            for (std::size_t j = 0; j < fine.node_count(); j += 6)
                CHECK(std::fabs(mlmc_cov(t, i, j) - oracle::ens_cov(om, i, j)) <= 1e-12L);
        }
        const auto gp = EnsembleGp::from_two_level(t);
        for (std::size_t i = 0; i < fine.node_count(); i += 4) CHECK(std::fabs(gp.cov(i, 3) - oracle::ens_cov(om, i, 3)) <= 1e-12L);
    }
    SUBCASE("MLMC PhIK: reduction, interpolation and dense oracle") {
        const auto t = make(6, 4, 0.2);
        const std::vector<std::size_t> nodes{2, 11, 20};
        std::vector<Point> xs;
        for (auto n : nodes) xs.push_back(fine.node(n));
        const Vector y = test::point({3.5, 2.0, 4.0});
        const ObservationSet obs(xs, y);

        oracle::Mat c = oracle::zeros(3, 3);
        oracle::Vec mu;
        for (std::size_t a = 0; a < 3; ++a) {
            mu.push_back(mlmc_mean(t, nodes[a]));
            for (std::size_t b = 0; b < 3; ++b) c[a][b] = mlmc_cov(t, nodes[a], nodes[b]);
        }
        for (std::size_t n = 0; n < fine.node_count(); ++n) {
            oracle::Vec cv;
            for (auto k : nodes) cv.push_back(mlmc_cov(t, k, n));
            const auto o = oracle::posterior(mlmc_mean(t, n), mlmc_cov(t, n, n), mu, c, cv, test::to_oracle(y));
            const auto p = mlmc_predict(t, obs, n);
            CHECK(test::rel_close(p.mean, o.mean, 1e-8L));
        }
        for (std::size_t i = 0; i < 3; ++i) CHECK(test::rel_close(mlmc_predict(t, obs, nodes[i]).mean, y[static_cast<Eigen::Index>(i)], 1e-8L));

        // Degenerate correction level: equals PhIK on the interpolated coarse ensemble.
        const auto z = make(6, 3, 0.0);
        Matrix interp(6, static_cast<Eigen::Index>(fine.node_count()));
        for (std::size_t m = 0; m < 6; ++m)
            for (std::size_t n = 0; n < fine.node_count(); ++n)
                interp(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) =
                    static_cast<double>(bilinear(coarse, coarse_values(z.coarse, m), fine.node(n)));
        const Ensemble single(fine, interp);
        for (std::size_t n = 0; n < fine.node_count(); n += 3) {
            const auto a = mlmc_predict(z, obs, n), b = phik_predict(single, obs, n);
            CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-9));
            CHECK(a.variance == doctest::Approx(b.variance).epsilon(1e-8).scale(1e-12));
        }
    }
}

}  // TEST_SUITE
