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
#include <filesystem>
#include <functional>
#include <limits>
#include <random>

#include "bench.hpp"
#include "config.hpp"
#include "doctest.h"
#include "io.hpp"
#include "support.hpp"

using namespace cophik;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cophik_io_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string error_message(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("io-config") {

TEST_CASE("doubles round-trip exactly through text") {
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int t = 0; t < 1000; ++t) {
        const double v = u(gen) * std::pow(10.0, static_cast<int>(gen() % 40) - 20);
        CHECK(parse_double(format_double(v)) == v);
    }
    for (double v : {0.0, -0.0, 1e-300, 5e-324, std::numeric_limits<double>::max(), 0.1})
        CHECK(parse_double(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
    CHECK_THROWS_AS(parse_double(""), ConfigError);
    CHECK_THROWS_AS(parse_uint("-3"), ConfigError);
}

TEST_CASE("field files round-trip") {
    TempDir dir;
    const Grid g = Grid::parse("0:1:5,-2:3:4");
    std::vector<double> v(g.node_count());
    std::mt19937_64 gen(2);
    std::normal_distribution<double> nd;
    for (auto& x : v) x = nd(gen) * 1e3;
    const Field f(g, v);
    write_field(dir / "a.fld", f);
    const Field back = read_field(dir / "a.fld");
    CHECK(back.grid() == g);
    CHECK(back.values() == v);
    CHECK(parse_field_header(field_header(g)) == g);
    CHECK_THROWS_AS(parse_field("#field dim=1 axes=3 bounds=0:1\n1\n2\n", "x"), Error);
    CHECK_THROWS_AS(read_field(dir / "missing.fld"), IoError);
}

TEST_CASE("ensemble directories round-trip with their manifest") {
    TempDir dir;
    const Ensemble e = generate_ensemble(Grid::unit(2, 6), 5, 44);
    const auto written = write_ensemble(dir / "ens", e, "branin", 44);
    EnsembleManifest m;
    const Ensemble back = read_ensemble(dir / "ens", &m);
    CHECK(back.data() == e.data());
    CHECK(back.grid() == e.grid());
    CHECK(m.members == 5);
    CHECK(m.seed == 44);
    CHECK(m.generator == "branin");
    CHECK(m.files == written.files);
    CHECK(m.files.front() == member_file_name(0));
    CHECK(EnsembleManifest::from_key_values(m.to_key_values()).files == m.files);
    CHECK_THROWS_AS(read_ensemble(dir / "nothing"), IoError);
}

TEST_CASE("observation CSV round-trips and rejects malformed rows") {
    TempDir dir;
    const ObservationSet obs({test::point({0.125, 0.5}), test::point({1.0 / 3.0, 0.9})}, test::point({-2.5, 1e-17}));
    write_observations(dir / "obs.csv", obs);
    const auto back = read_observations(dir / "obs.csv");
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(back.location(i) == obs.location(i));
    CHECK(back.values() == obs.values());
    CHECK(format_observations(obs).rfind("x0,x1,value\n", 0) == 0);
    CHECK_THROWS(parse_observations("x0,value\n0.5\n", "bad"));
    CHECK_THROWS(parse_observations("x0,value\n0.5,abc\n", "bad"));
    CHECK_THROWS(parse_observations("x0,x1,value\n0.5,0.5,1\n0.5,2\n", "bad"));
}

TEST_CASE("model files rebuild an identical surrogate") {
    const Grid g = Grid::unit(2, 7);
    const auto ens = std::make_shared<const Ensemble>(generate_ensemble(g, 20, 3));
    const auto obs = observe(branin_reference(g), {3, 17, 30, 44});
    for (auto kind : {LearnerKind::OrdinaryKriging, LearnerKind::Phik, LearnerKind::ModifiedPhik, LearnerKind::Cophik}) {
        CAPTURE(to_string(kind));
        LearnerConfig cfg;
        cfg.kind = kind;
        const auto e = needs_ensemble(kind) ? ens : nullptr;
        const auto model = fit_learner(cfg, g, e, obs);
        const auto text = format_key_values(model_to_key_values(*model));
        const auto rebuilt = model_from_key_values(parse_key_values(text, "model"), e);
        const auto a = model->predict_grid(), b = rebuilt->predict_grid();
        CHECK(a.first.values() == b.first.values());
        CHECK(a.second.values() == b.second.values());
        CHECK(format_key_values(model_to_key_values(*rebuilt)) == text);
    }
}

TEST_CASE("run configuration") {
    SUBCASE("defaults") {
        const RunConfig c = RunConfig::parse("", "empty");
        CHECK(c.learner == LearnerKind::Cophik);
        CHECK(c.seed == 1);
        CHECK(c.n_max == 24);
        CHECK(c.members == 300);
        CHECK(c.initial_observations == 8);
        CHECK(c.grid == "0:1:41,0:1:41");
        CHECK(c.rho.count == 41);
        CHECK(c.optimizer.starts == 10);
        CHECK(c.nugget.cap == 1e-4);
        CHECK(c.learners.size() == 4);
    }
    SUBCASE("round-trip through text") {
        const RunConfig c = RunConfig::parse("learner = phik\nseed = 9\nnugget_cap = 1e-6\n# comment\n\nrho_count = 21\n", "x");
        CHECK(c.learner == LearnerKind::Phik);
        CHECK(c.seed == 9);
        const RunConfig d = RunConfig::parse(format_key_values(c.to_key_values()), "y");
        CHECK(format_key_values(d.to_key_values()) == format_key_values(c.to_key_values()));
        CHECK(d.learner_config().settings.optimizer.seed == 9);
    }
    SUBCASE("errors name the offending key") {
        CHECK(error_message([] { RunConfig::parse("lengthscale = 3\n", "cfg"); }).find("lengthscale") != std::string::npos);
        CHECK_THROWS_AS(RunConfig::parse("seed = abc\n", "cfg"), ConfigError);
        CHECK_THROWS_AS(RunConfig::parse("learner = svm\n", "cfg"), ConfigError);
        CHECK_THROWS_AS(RunConfig::parse("rho_lower = 1.5\n", "cfg"), ConfigError);
        CHECK_THROWS_AS(RunConfig::parse("nugget_growth = 1\n", "cfg"), ConfigError);
        CHECK_THROWS_AS(RunConfig::parse("no equals sign\n", "cfg"), ConfigError);
        CHECK_THROWS_AS(RunConfig::load("/nonexistent/cophik.cfg"), IoError);
    }
}

}  // TEST_SUITE
