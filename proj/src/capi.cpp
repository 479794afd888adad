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

#include "cophik/cophik.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "bench.hpp"
#include "config.hpp"
#include "constraint.hpp"
#include "io.hpp"
#include "rng.hpp"

struct cophik_config {
    cophik::RunConfig cfg;
};
struct cophik_grid {
    cophik::Grid grid;
};
struct cophik_field {
    cophik::Field field;
};
struct cophik_ensemble {
    std::shared_ptr<const cophik::Ensemble> ens;
    std::string generator;
    std::uint64_t seed = 0;
};
struct cophik_obs {
    cophik::ObservationSet obs;
};
struct cophik_model {
    std::unique_ptr<cophik::Surrogate> model;
    std::shared_ptr<const cophik::Ensemble> ens;
};
struct cophik_trajectory {
    cophik::LearningTrajectory traj;
    cophik::Grid grid;
};
struct cophik_report {
    cophik::BoundReport report;
};

namespace {

thread_local std::string last_error;

cophik_status fail(cophik_status s, const std::string& msg) {
    last_error = msg;
    return s;
}

template <class F>
cophik_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return COPHIK_OK;
    } catch (const cophik::ConfigError& e) {
        return fail(COPHIK_ERR_CONFIG, e.what());
    } catch (const cophik::DimensionError& e) {
        return fail(COPHIK_ERR_CONFIG, e.what());
    } catch (const cophik::NumericalError& e) {
        return fail(COPHIK_ERR_NUMERICAL, e.what());
    } catch (const cophik::IoError& e) {
        return fail(COPHIK_ERR_IO, e.what());
    } catch (const cophik::Error& e) {
        return fail(COPHIK_ERR_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return fail(COPHIK_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(COPHIK_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(COPHIK_ERR_INTERNAL, "unknown error");
    }
}

template <class... T>
bool any_null(T*... p) {
    return ((p == nullptr) || ...);
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

cophik_status null_argument() { return fail(COPHIK_ERR_INVALID_ARGUMENT, "null argument"); }

cophik::LearnerKind learner_kind(const cophik_config* cfg, const char* learner) {
    return learner ? cophik::parse_learner(learner) : cfg->cfg.learner;
}

std::shared_ptr<const cophik::Ensemble> ensemble_of(const cophik_ensemble* e) { return e ? e->ens : nullptr; }

cophik_field* new_field(cophik::Field f) { return new cophik_field{std::move(f)}; }

cophik::Field rmse_of(const cophik::Field& variance) {
    std::vector<double> v(variance.values());
    for (auto& x : v) x = std::sqrt(x);
    return cophik::Field(variance.grid(), std::move(v));
}

std::string trajectory_summary(const cophik::LearningTrajectory& t) {
    cophik::KeyValues kv{{"learner", cophik::to_string(t.kind)},
                         {"initial_observations", std::to_string(t.initial_count)},
                         {"added_observations", std::to_string(t.steps.size())},
                         {"initial_error", cophik::format_double(t.initial_error)},
                         {"final_error", cophik::format_double(t.steps.empty() ? t.initial_error
                                                                                : t.steps.back().relative_error)},
                         {"failed", t.failed ? "true" : "false"}};
    if (t.failed) kv.emplace_back("failure", t.failure);
    return cophik::format_key_values(kv);
}

}  // namespace

extern "C" {

const char* cophik_version(void) { return "1.0.0"; }

const char* cophik_last_error(void) { return last_error.c_str(); }

void cophik_string_free(char* s) { std::free(s); }

cophik_status cophik_config_default(cophik_config** out) {
    if (any_null(out)) return null_argument();
    return guarded([&] { *out = new cophik_config{}; });
}

cophik_status cophik_config_load(const char* path, cophik_config** out) {
    if (any_null(path, out)) return null_argument();
    return guarded([&] { *out = new cophik_config{cophik::RunConfig::load(path)}; });
}

cophik_status cophik_config_set(cophik_config* cfg, const char* key, const char* value) {
    if (any_null(cfg, key, value)) return null_argument();
    return guarded([&] {
        cophik::KeyValues kv = cfg->cfg.to_key_values();
        bool found = false;
        for (auto& [k, v] : kv) {
            if (k == key) {
                v = value;
                found = true;
            }
        }
        if (!found) throw cophik::ConfigError(std::string("unknown configuration key '") + key + "'");
        cfg->cfg = cophik::RunConfig::parse(cophik::format_key_values(kv), "settings");
    });
}

cophik_status cophik_config_seed(const cophik_config* cfg, uint64_t* seed) {
    if (any_null(cfg, seed)) return null_argument();
    *seed = cfg->cfg.seed;
    return COPHIK_OK;
}

cophik_status cophik_config_n_max(const cophik_config* cfg, size_t* n_max) {
    if (any_null(cfg, n_max)) return null_argument();
    *n_max = cfg->cfg.n_max;
    return COPHIK_OK;
}

cophik_status cophik_config_to_text(const cophik_config* cfg, char** out) {
    if (any_null(cfg, out)) return null_argument();
    return guarded([&] { *out = dup_string(cophik::format_key_values(cfg->cfg.to_key_values())); });
}

void cophik_config_free(cophik_config* cfg) { delete cfg; }

cophik_status cophik_grid_parse(const char* spec, cophik_grid** out) {
    if (any_null(spec, out)) return null_argument();
    return guarded([&] { *out = new cophik_grid{cophik::Grid::parse(spec)}; });
}

cophik_status cophik_grid_from_config(const cophik_config* cfg, cophik_grid** out) {
    if (any_null(cfg, out)) return null_argument();
    return guarded([&] { *out = new cophik_grid{cophik::Grid::parse(cfg->cfg.grid)}; });
}

size_t cophik_grid_dim(const cophik_grid* g) { return g ? g->grid.dim() : 0; }

size_t cophik_grid_node_count(const cophik_grid* g) { return g ? g->grid.node_count() : 0; }

cophik_status cophik_grid_node(const cophik_grid* g, size_t index, double* coords) {
    if (any_null(g, coords)) return null_argument();
    if (index >= g->grid.node_count()) return fail(COPHIK_ERR_INVALID_ARGUMENT, "node index out of range");
    const cophik::Point p = g->grid.node(index);
    for (Eigen::Index k = 0; k < p.size(); ++k) coords[k] = p[k];
    return COPHIK_OK;
}

cophik_status cophik_grid_spec(const cophik_grid* g, char** out) {
    if (any_null(g, out)) return null_argument();
    return guarded([&] { *out = dup_string(g->grid.spec()); });
}

void cophik_grid_free(cophik_grid* g) { delete g; }

cophik_status cophik_field_create(const cophik_grid* g, const double* values, size_t count, cophik_field** out) {
    if (any_null(g, values, out)) return null_argument();
    return guarded([&] { *out = new_field(cophik::Field(g->grid, std::vector<double>(values, values + count))); });
}

cophik_status cophik_field_read(const char* path, cophik_field** out) {
    if (any_null(path, out)) return null_argument();
    return guarded([&] { *out = new_field(cophik::read_field(path)); });
}

cophik_status cophik_field_write(const cophik_field* f, const char* path) {
    if (any_null(f, path)) return null_argument();
    return guarded([&] { cophik::write_field(path, f->field); });
}

size_t cophik_field_size(const cophik_field* f) { return f ? f->field.size() : 0; }

const double* cophik_field_values(const cophik_field* f) { return f ? f->field.values().data() : nullptr; }

cophik_status cophik_field_grid(const cophik_field* f, cophik_grid** out) {
    if (any_null(f, out)) return null_argument();
    return guarded([&] { *out = new cophik_grid{f->field.grid()}; });
}

cophik_status cophik_field_relative_error(const cophik_field* reconstructed, const cophik_field* reference,
                                          double* out) {
    if (any_null(reconstructed, reference, out)) return null_argument();
    return guarded([&] { *out = cophik::relative_error(reconstructed->field, reference->field); });
}

void cophik_field_free(cophik_field* f) { delete f; }

cophik_status cophik_ensemble_read(const char* dir, cophik_ensemble** out) {
    if (any_null(dir, out)) return null_argument();
    return guarded([&] {
        cophik::EnsembleManifest m;
        auto ens = std::make_shared<const cophik::Ensemble>(cophik::read_ensemble(dir, &m));
        *out = new cophik_ensemble{std::move(ens), m.generator, m.seed};
    });
}

cophik_status cophik_ensemble_write(const cophik_ensemble* e, const char* dir) {
    if (any_null(e, dir)) return null_argument();
    return guarded([&] { cophik::write_ensemble(dir, *e->ens, e->generator, e->seed); });
}

cophik_status cophik_ensemble_generate_branin(const cophik_grid* g, size_t members, uint64_t seed,
                                              cophik_ensemble** out) {
    if (any_null(g, out)) return null_argument();
    return guarded([&] {
        auto ens = std::make_shared<const cophik::Ensemble>(cophik::generate_ensemble(g->grid, members, seed));
        *out = new cophik_ensemble{std::move(ens), std::string("branin/") + cophik::Rng::kName, seed};
    });
}

size_t cophik_ensemble_size(const cophik_ensemble* e) { return e ? e->ens->size() : 0; }

cophik_status cophik_ensemble_grid(const cophik_ensemble* e, cophik_grid** out) {
    if (any_null(e, out)) return null_argument();
    return guarded([&] { *out = new cophik_grid{e->ens->grid()}; });
}

cophik_status cophik_ensemble_mean(const cophik_ensemble* e, cophik_field** out) {
    if (any_null(e, out)) return null_argument();
    return guarded([&] { *out = new_field(cophik::EnsembleGp::from_ensemble(*e->ens).mean_field()); });
}

void cophik_ensemble_free(cophik_ensemble* e) { delete e; }

cophik_status cophik_obs_create(size_t dim, size_t count, const double* coords, const double* values,
                                cophik_obs** out) {
    if (any_null(coords, values, out)) return null_argument();
    return guarded([&] {
        std::vector<cophik::Point> x;
        for (size_t i = 0; i < count; ++i)
            x.push_back(Eigen::Map<const cophik::Vector>(coords + i * dim, static_cast<Eigen::Index>(dim)));
        cophik::Vector y = Eigen::Map<const cophik::Vector>(values, static_cast<Eigen::Index>(count));
        *out = new cophik_obs{cophik::ObservationSet(std::move(x), std::move(y))};
    });
}

cophik_status cophik_obs_read(const char* path, cophik_obs** out) {
    if (any_null(path, out)) return null_argument();
    return guarded([&] { *out = new cophik_obs{cophik::read_observations(path)}; });
}

cophik_status cophik_obs_write(const cophik_obs* o, const char* path) {
    if (any_null(o, path)) return null_argument();
    return guarded([&] { cophik::write_observations(path, o->obs); });
}

size_t cophik_obs_size(const cophik_obs* o) { return o ? o->obs.size() : 0; }

size_t cophik_obs_dim(const cophik_obs* o) { return o ? o->obs.dim() : 0; }

cophik_status cophik_obs_get(const cophik_obs* o, size_t i, double* coords, double* value) {
    if (any_null(o)) return null_argument();
    if (i >= o->obs.size()) return fail(COPHIK_ERR_INVALID_ARGUMENT, "observation index out of range");
    if (coords)
        for (Eigen::Index k = 0; k < o->obs.location(i).size(); ++k) coords[k] = o->obs.location(i)[k];
    if (value) *value = o->obs.values()[static_cast<Eigen::Index>(i)];
    return COPHIK_OK;
}

cophik_status cophik_obs_snap(const cophik_obs* o, const cophik_grid* g, cophik_obs** out, double* distances) {
    if (any_null(o, g, out)) return null_argument();
    return guarded([&] {
        cophik::SnapResult s = cophik::snap_to_nodes(g->grid, o->obs);
        if (distances) std::copy(s.distances.begin(), s.distances.end(), distances);
        *out = new cophik_obs{s.obs.to_points(g->grid)};
    });
}

void cophik_obs_free(cophik_obs* o) { delete o; }

cophik_status cophik_fit(const cophik_config* cfg, const char* learner, const cophik_grid* g,
                         const cophik_ensemble* ens, const cophik_obs* obs, cophik_model** out) {
    if (any_null(cfg, g, obs, out)) return null_argument();
    return guarded([&] {
        const auto lc = cfg->cfg.learner_config(learner_kind(cfg, learner));
        auto e = ensemble_of(ens);
        auto model = cophik::fit_learner(lc, g->grid, e, obs->obs);
        *out = new cophik_model{std::move(model), std::move(e)};
    });
}

cophik_status cophik_model_save(const cophik_model* m, const char* path) {
    if (any_null(m, path)) return null_argument();
    return guarded([&] { cophik::write_text_file(path, cophik::format_key_values(cophik::model_to_key_values(*m->model))); });
}

cophik_status cophik_model_load(const char* path, const cophik_ensemble* ens, cophik_model** out) {
    if (any_null(path, out)) return null_argument();
    return guarded([&] {
        auto e = ensemble_of(ens);
        auto kv = cophik::parse_key_values(cophik::read_text_file(path), path);
        auto model = cophik::model_from_key_values(kv, e);
        *out = new cophik_model{std::move(model), std::move(e)};
    });
}

cophik_status cophik_model_learner(const cophik_model* m, char** out) {
    if (any_null(m, out)) return null_argument();
    return guarded([&] { *out = dup_string(cophik::to_string(m->model->kind())); });
}

cophik_status cophik_model_predict_node(const cophik_model* m, size_t node, double* mean, double* variance) {
    if (any_null(m)) return null_argument();
    if (node >= m->model->grid().node_count()) return fail(COPHIK_ERR_INVALID_ARGUMENT, "node index out of range");
    return guarded([&] {
        const auto p = m->model->predict(node);
        if (mean) *mean = p.mean;
        if (variance) *variance = p.variance;
    });
}

cophik_status cophik_model_predict_grid(const cophik_model* m, cophik_field** mean, cophik_field** rmse) {
    if (any_null(m)) return null_argument();
    return guarded([&] {
        auto [mu, var] = m->model->predict_grid();
        if (rmse) *rmse = new_field(rmse_of(var));
        if (mean) *mean = new_field(std::move(mu));
    });
}

cophik_status cophik_model_to_text(const cophik_model* m, char** out) {
    if (any_null(m, out)) return null_argument();
    return guarded([&] { *out = dup_string(cophik::format_key_values(cophik::model_to_key_values(*m->model))); });
}

void cophik_model_free(cophik_model* m) { delete m; }

cophik_status cophik_active_learn(const cophik_config* cfg, const char* learner, const cophik_field* truth,
                                  const cophik_ensemble* ens, const cophik_obs* initial, size_t n_max,
                                  cophik_trajectory** out) {
    if (any_null(cfg, truth, initial, out)) return null_argument();
    return guarded([&] {
        const auto lc = cfg->cfg.learner_config(learner_kind(cfg, learner));
        auto t = cophik::active_learn(lc, truth->field, ensemble_of(ens), initial->obs, n_max);
        *out = new cophik_trajectory{std::move(t), truth->field.grid()};
    });
}

size_t cophik_trajectory_steps(const cophik_trajectory* t) { return t ? t->traj.steps.size() : 0; }

int cophik_trajectory_failed(const cophik_trajectory* t) { return t && t->traj.failed ? 1 : 0; }

double cophik_trajectory_initial_error(const cophik_trajectory* t) { return t ? t->traj.initial_error : NAN; }

cophik_status cophik_trajectory_step(const cophik_trajectory* t, size_t k, size_t* node, double* value,
                                     double* max_mse, double* relative_error) {
    if (any_null(t)) return null_argument();
    if (k >= t->traj.steps.size()) return fail(COPHIK_ERR_INVALID_ARGUMENT, "step index out of range");
    const auto& s = t->traj.steps[k];
    if (node) *node = s.node;
    if (value) *value = s.value;
    if (max_mse) *max_mse = s.max_mse;
    if (relative_error) *relative_error = s.relative_error;
    return COPHIK_OK;
}

cophik_status cophik_trajectory_write_csv(const cophik_trajectory* t, const char* path) {
    if (any_null(t, path)) return null_argument();
    return guarded([&] { cophik::write_text_file(path, cophik::format_trajectory(t->traj, t->grid)); });
}

cophik_status cophik_trajectory_summary(const cophik_trajectory* t, char** out) {
    if (any_null(t, out)) return null_argument();
    return guarded([&] { *out = dup_string(trajectory_summary(t->traj)); });
}

cophik_status cophik_trajectory_final(const cophik_trajectory* t, cophik_field** mean, cophik_field** rmse) {
    if (any_null(t)) return null_argument();
    if (!t->traj.mean) return fail(COPHIK_ERR_NUMERICAL, "no successful fit in this trajectory");
    return guarded([&] {
        if (mean) *mean = new_field(*t->traj.mean);
        if (rmse) *rmse = new_field(rmse_of(*t->traj.variance));
    });
}

cophik_status cophik_trajectory_observations(const cophik_trajectory* t, cophik_obs** out) {
    if (any_null(t, out)) return null_argument();
    return guarded([&] { *out = new cophik_obs{t->traj.observations}; });
}

void cophik_trajectory_free(cophik_trajectory* t) { delete t; }

cophik_status cophik_verify_bound(const cophik_model* m, const char* op, const double* constraint_value,
                                  const double* eps, cophik_report** out) {
    if (any_null(m, op, out)) return null_argument();
    return guarded([&] {
        if (!m->ens) throw cophik::ConfigError("constraint bounds need an ensemble-based model");
        const auto lop = cophik::LinearOperator::parse(op, m->model->grid());
        auto cdata = constraint_value ? cophik::ConstraintData::constant(lop, *m->ens, *constraint_value)
                                      : cophik::ConstraintData::from_members(lop, *m->ens);
        if (eps) {
            if (!(*eps >= 0.0)) throw cophik::ConfigError("eps must be non-negative");
            cdata.eps = *eps;
            cdata.eps_estimated = false;
        }
        cophik::BoundReport r;
        if (const auto* p = cophik::as_phik(*m->model))
            r = cophik::theorem1_bound(*p, *m->ens, lop, cdata);
        else if (const auto* c = cophik::as_cophik(*m->model))
            r = cophik::theorem2_bound(*c, lop, cdata);
        else
            throw cophik::ConfigError("constraint bounds are defined for phik, modified-phik and cophik models");
        *out = new cophik_report{std::move(r)};
    });
}

int cophik_report_pass(const cophik_report* r) { return r && r->report.pass ? 1 : 0; }

double cophik_report_lhs(const cophik_report* r) { return r ? r->report.lhs : NAN; }

double cophik_report_rhs(const cophik_report* r) { return r ? r->report.rhs : NAN; }

cophik_status cophik_report_to_text(const cophik_report* r, char** out) {
    if (any_null(r, out)) return null_argument();
    return guarded([&] {
        cophik::KeyValues kv = r->report.to_key_values();
        *out = dup_string(cophik::format_key_values(kv));
    });
}

void cophik_report_free(cophik_report* r) { delete r; }

cophik_status cophik_bench_branin(const cophik_config* cfg, const char* out_dir) {
    if (any_null(cfg, out_dir)) return null_argument();
    return guarded([&] {
        using namespace cophik;
        const BenchmarkConfig bc = BenchmarkConfig::from_run_config(cfg->cfg);
        const BenchmarkRun run = run_benchmark(bc);
        const std::string dir = out_dir;
        ensure_directory(dir);
        write_field(join_path(dir, "reference.fld"), run.reference);
        write_ensemble(join_path(dir, "ensemble"), *run.ensemble, std::string("branin/") + Rng::kName, bc.seed);
        write_observations(join_path(dir, "initial_observations.csv"),
                           observe(run.reference, run.initial_nodes).to_points(run.reference.grid()));

        std::string curve = "learner,n_obs,rel_error\n";
        for (const auto& t : run.trajectories) {
            const std::string name = to_string(t.kind);
            const std::string sub = join_path(dir, name);
            ensure_directory(sub);
            write_text_file(join_path(sub, "trajectory.csv"), format_trajectory(t, run.reference.grid()));
            write_text_file(join_path(sub, "summary.txt"), trajectory_summary(t));
            if (t.mean) {
                write_field(join_path(sub, "mean.fld"), *t.mean);
                write_field(join_path(sub, "rmse.fld"), rmse_of(*t.variance));
            }
            for (const auto& [n, e] : t.error_curve()) curve += name + "," + std::to_string(n) + "," + format_double(e) + "\n";
        }
        write_text_file(join_path(dir, "error_curve.csv"), curve);

        KeyValues manifest{{"benchmark", "branin"},
                           {"generator", std::string("branin/") + Rng::kName},
                           {"ensemble_seed", std::to_string(bc.seed)},
                           {"observation_seed", std::to_string(substream_seed(bc.seed, kObservationStream))},
                           {"ensemble_mean_error", format_double(run.ensemble_mean_error)}};
        std::string nodes;
        for (std::size_t i = 0; i < run.initial_nodes.size(); ++i) nodes += (i ? "," : "") + std::to_string(run.initial_nodes[i]);
        manifest.emplace_back("initial_nodes", nodes);
        for (auto& kv : cfg->cfg.to_key_values()) manifest.emplace_back("config." + kv.first, kv.second);
        write_text_file(join_path(dir, "manifest.txt"), format_key_values(manifest));
    });
}

}  // extern "C"
