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

// Command-line front end. Uses only the public C interface.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cophik/cophik.h"

namespace {

enum ExitCode : int {
    kExitOk = 0,
    kExitInternal = 1,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

int exit_code(cophik_status s) {
    switch (s) {
        case COPHIK_OK: return kExitOk;
        case COPHIK_ERR_CONFIG:
        case COPHIK_ERR_INVALID_ARGUMENT: return kExitConfig;
        case COPHIK_ERR_NUMERICAL: return kExitNumerical;
        case COPHIK_ERR_IO: return kExitIo;
        default: return kExitInternal;
    }
}

struct Failure {
    cophik_status status;
    std::string message;
};

void check(cophik_status s, const std::string& what) {
    if (s != COPHIK_OK) throw Failure{s, what + ": " + cophik_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};

template <class T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, Deleter<T, Free>>;

using Config = Handle<cophik_config, cophik_config_free>;
using GridH = Handle<cophik_grid, cophik_grid_free>;
using FieldH = Handle<cophik_field, cophik_field_free>;
using EnsembleH = Handle<cophik_ensemble, cophik_ensemble_free>;
using ObsH = Handle<cophik_obs, cophik_obs_free>;
using ModelH = Handle<cophik_model, cophik_model_free>;
using TrajectoryH = Handle<cophik_trajectory, cophik_trajectory_free>;
using ReportH = Handle<cophik_report, cophik_report_free>;

std::string take_string(char* s) {
    std::string out = s ? s : "";
    cophik_string_free(s);
    return out;
}

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void make_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Failure{COPHIK_ERR_IO, "cannot create directory '" + dir + "': " + ec.message()};
}

void write_file(const std::string& path, const std::string& text) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Failure{COPHIK_ERR_IO, "cannot write '" + path + "'"};
    const bool ok = std::fwrite(text.data(), 1, text.size(), f) == text.size();
    if (std::fclose(f) != 0 || !ok) throw Failure{COPHIK_ERR_IO, "cannot write '" + path + "'"};
}

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
};

Config load_config(const Common& c) {
    cophik_config* raw = nullptr;
    if (c.config_path.empty())
        check(cophik_config_default(&raw), "default configuration");
    else
        check(cophik_config_load(c.config_path.c_str(), &raw), "configuration");
    Config cfg(raw);
    if (c.seed) check(cophik_config_set(cfg.get(), "seed", std::to_string(*c.seed).c_str()), "--seed");
    return cfg;
}

GridH parse_grid(const std::string& spec) {
    cophik_grid* g = nullptr;
    check(cophik_grid_parse(spec.c_str(), &g), "--grid");
    return GridH(g);
}

EnsembleH read_ensemble(const std::string& dir) {
    cophik_ensemble* e = nullptr;
    check(cophik_ensemble_read(dir.c_str(), &e), "ensemble '" + dir + "'");
    return EnsembleH(e);
}

ObsH read_obs(const std::string& path) {
    cophik_obs* o = nullptr;
    check(cophik_obs_read(path.c_str(), &o), "observations '" + path + "'");
    return ObsH(o);
}

bool needs_ensemble(const std::string& learner) { return learner != "kriging" && learner != "ordinary-kriging"; }

// Distances below this are rounding in the node coordinates, not a move.
constexpr double kSnapReportTolerance = 1e-12;

/// Moves off-node observations to the nearest node, logging each move.
ObsH snap_if_needed(ObsH obs, const cophik_grid* grid) {
    std::vector<double> dist(cophik_obs_size(obs.get()));
    cophik_obs* snapped = nullptr;
    check(cophik_obs_snap(obs.get(), grid, &snapped, dist.data()), "snapping observations to grid nodes");
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (dist[i] > kSnapReportTolerance) std::fprintf(stderr, "warning: observation %zu snapped to nearest node (distance %.17g)\n", i, dist[i]);
    return ObsH(snapped);
}

void write_posterior(const cophik_model* m, const std::string& out) {
    cophik_field* mean = nullptr;
    cophik_field* rmse = nullptr;
    check(cophik_model_predict_grid(m, &mean, &rmse), "prediction");
    FieldH mh(mean), rh(rmse);
    check(cophik_field_write(mh.get(), path_in(out, "mean.fld").c_str()), "writing mean.fld");
    check(cophik_field_write(rh.get(), path_in(out, "rmse.fld").c_str()), "writing rmse.fld");
}

std::string resolve_learner(const std::string& flag, const cophik_config* cfg) {
    if (!flag.empty()) return flag;
    const std::string text = take_string([&] {
        char* s = nullptr;
        check(cophik_config_to_text(cfg, &s), "configuration");
        return s;
    }());
    const std::string key = "learner = ";
    const auto pos = text.find(key);
    return text.substr(pos + key.size(), text.find('\n', pos) - pos - key.size());
}

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "run configuration file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", c.seed, "random seed (overrides the configuration)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian-process regression with ensemble-informed priors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(cophik_version()));

    Common common;
    std::string out, grid_spec, ensemble_dir, obs_path, learner, model_path, oracle_path, op_spec;
    std::optional<std::size_t> n_max, members;
    std::optional<double> constraint_value, eps;

    auto* gen = app.add_subcommand("ensemble-gen", "generate a stochastic Branin ensemble");
    add_common(gen, common);
    gen->add_option("--out", out, "output directory")->required();
    gen->add_option("--grid", grid_spec, "grid spec l:u:n,...");
    gen->add_option("--members", members, "ensemble size (overrides the configuration)");

    auto* fit = app.add_subcommand("fit", "fit a learner and write the posterior");
    add_common(fit, common);
    fit->add_option("--learner", learner, "kriging | phik | modified-phik | cophik");
    fit->add_option("--ensemble", ensemble_dir, "ensemble directory");
    fit->add_option("--obs", obs_path, "observation CSV")->required()->check(CLI::ExistingFile);
    fit->add_option("--grid", grid_spec, "grid spec l:u:n,...");
    fit->add_option("--out", out, "output directory")->required();

    auto* pred = app.add_subcommand("predict", "evaluate a saved model on its grid");
    add_common(pred, common);
    pred->add_option("--model", model_path, "model file written by fit")->required()->check(CLI::ExistingFile);
    pred->add_option("--ensemble", ensemble_dir, "ensemble directory");
    pred->add_option("--out", out, "output directory")->required();

    auto* al = app.add_subcommand("active-learn", "greedy observation placement at the MSE maximizer");
    add_common(al, common);
    al->add_option("--learner", learner, "kriging | phik | modified-phik | cophik");
    al->add_option("--oracle", oracle_path, "field file with the true values")->required()->check(CLI::ExistingFile);
    al->add_option("--obs", obs_path, "initial observation CSV")->required()->check(CLI::ExistingFile);
    al->add_option("--ensemble", ensemble_dir, "ensemble directory");
    al->add_option("--n-max", n_max, "final observation count");
    al->add_option("--out", out, "output directory")->required();

    auto* vb = app.add_subcommand("verify-bound", "evaluate both sides of the constraint error bound");
    add_common(vb, common);
    vb->add_option("--model", model_path, "model file written by fit")->required()->check(CLI::ExistingFile);
    vb->add_option("--ensemble", ensemble_dir, "ensemble directory")->required();
    vb->add_option("--operator", op_spec, "point:<nodes> | point:boundary | deriv:<axis> | laplacian")->required();
    vb->add_option("--constraint-value", constraint_value, "constant right-hand side (default: operator of each member)");
    vb->add_option("--eps", eps, "constraint tolerance (default: estimated from the members)");
    vb->add_option("--out", out, "output directory")->required();

    auto* bench = app.add_subcommand("bench-branin", "run the Branin benchmark end to end");
    add_common(bench, common);
    bench->add_option("--out", out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        Config cfg = load_config(common);
        make_dir(out);

        if (gen->parsed()) {
            if (!grid_spec.empty()) check(cophik_config_set(cfg.get(), "grid", grid_spec.c_str()), "--grid");
            if (members) check(cophik_config_set(cfg.get(), "members", std::to_string(*members).c_str()), "--members");
            cophik_grid* g = nullptr;
            check(cophik_grid_from_config(cfg.get(), &g), "grid");
            GridH grid(g);
            std::uint64_t seed = 0;
            check(cophik_config_seed(cfg.get(), &seed), "seed");
            const std::string text = take_string([&] {
                char* s = nullptr;
                check(cophik_config_to_text(cfg.get(), &s), "configuration");
                return s;
            }());
            std::size_t m = 0;
            {
                const std::string key = "members = ";
                const auto pos = text.find(key);
                m = std::stoul(text.substr(pos + key.size()));
            }
            cophik_ensemble* e = nullptr;
            check(cophik_ensemble_generate_branin(grid.get(), m, seed, &e), "ensemble generation");
            EnsembleH ens(e);
            check(cophik_ensemble_write(ens.get(), out.c_str()), "writing ensemble");
            std::fprintf(stderr, "wrote %zu members to %s\n", m, out.c_str());
        } else if (fit->parsed()) {
            learner = resolve_learner(learner, cfg.get());
            EnsembleH ens;
            if (!ensemble_dir.empty()) ens = read_ensemble(ensemble_dir);
            if (needs_ensemble(learner) && !ens) throw Failure{COPHIK_ERR_CONFIG, "learner '" + learner + "' requires --ensemble"};
            if (!needs_ensemble(learner) && ens) throw Failure{COPHIK_ERR_CONFIG, "learner '" + learner + "' does not take --ensemble"};
            GridH grid;
            if (!grid_spec.empty()) {
                grid = parse_grid(grid_spec);
            } else if (ens) {
                cophik_grid* g = nullptr;
                check(cophik_ensemble_grid(ens.get(), &g), "ensemble grid");
                grid.reset(g);
            } else {
                cophik_grid* g = nullptr;
                check(cophik_grid_from_config(cfg.get(), &g), "grid");
                grid.reset(g);
            }
            ObsH obs = read_obs(obs_path);
            if (ens) obs = snap_if_needed(std::move(obs), grid.get());
            cophik_model* m = nullptr;
            check(cophik_fit(cfg.get(), learner.c_str(), grid.get(), ens.get(), obs.get(), &m), "fit");
            ModelH model(m);
            check(cophik_model_save(model.get(), path_in(out, "model.txt").c_str()), "writing model.txt");
            write_posterior(model.get(), out);
        } else if (pred->parsed()) {
            EnsembleH ens;
            if (!ensemble_dir.empty()) ens = read_ensemble(ensemble_dir);
            cophik_model* m = nullptr;
            check(cophik_model_load(model_path.c_str(), ens.get(), &m), "model '" + model_path + "'");
            ModelH model(m);
            write_posterior(model.get(), out);
        } else if (al->parsed()) {
            learner = resolve_learner(learner, cfg.get());
            EnsembleH ens;
            if (!ensemble_dir.empty()) ens = read_ensemble(ensemble_dir);
            if (needs_ensemble(learner) && !ens) throw Failure{COPHIK_ERR_CONFIG, "learner '" + learner + "' requires --ensemble"};
            if (!needs_ensemble(learner) && ens) throw Failure{COPHIK_ERR_CONFIG, "learner '" + learner + "' does not take --ensemble"};
            cophik_field* f = nullptr;
            check(cophik_field_read(oracle_path.c_str(), &f), "oracle '" + oracle_path + "'");
            FieldH truth(f);
            cophik_grid* g = nullptr;
            check(cophik_field_grid(truth.get(), &g), "oracle grid");
            GridH grid(g);
            ObsH obs = read_obs(obs_path);
            if (ens) obs = snap_if_needed(std::move(obs), grid.get());
            std::size_t target = 0;
            check(cophik_config_n_max(cfg.get(), &target), "n_max");
            if (n_max) target = *n_max;
            if (target < cophik_obs_size(obs.get()))
                throw Failure{COPHIK_ERR_CONFIG, "--n-max is smaller than the initial observation count"};
            cophik_trajectory* t = nullptr;
            check(cophik_active_learn(cfg.get(), learner.c_str(), truth.get(), ens.get(), obs.get(), target, &t),
                  "active learning");
            TrajectoryH traj(t);
            check(cophik_trajectory_write_csv(traj.get(), path_in(out, "trajectory.csv").c_str()), "writing trajectory.csv");
            write_file(path_in(out, "summary.txt"), take_string([&] {
                           char* s = nullptr;
                           check(cophik_trajectory_summary(traj.get(), &s), "summary");
                           return s;
                       }()));
            cophik_obs* final_obs = nullptr;
            check(cophik_trajectory_observations(traj.get(), &final_obs), "observations");
            ObsH fo(final_obs);
            check(cophik_obs_write(fo.get(), path_in(out, "observations.csv").c_str()), "writing observations.csv");
            cophik_field* mean = nullptr;
            cophik_field* rmse = nullptr;
            check(cophik_trajectory_final(traj.get(), &mean, &rmse), "final posterior");
            FieldH mh(mean), rh(rmse);
            check(cophik_field_write(mh.get(), path_in(out, "mean.fld").c_str()), "writing mean.fld");
            check(cophik_field_write(rh.get(), path_in(out, "rmse.fld").c_str()), "writing rmse.fld");
            if (cophik_trajectory_failed(traj.get())) {
                std::fprintf(stderr, "error: a fit failed after %zu added observations\n", cophik_trajectory_steps(traj.get()));
                return kExitNumerical;
            }
        } else if (vb->parsed()) {
            EnsembleH ens = read_ensemble(ensemble_dir);
            cophik_model* m = nullptr;
            check(cophik_model_load(model_path.c_str(), ens.get(), &m), "model '" + model_path + "'");
            ModelH model(m);
            cophik_report* r = nullptr;
            check(cophik_verify_bound(model.get(), op_spec.c_str(), constraint_value ? &*constraint_value : nullptr,
                                      eps ? &*eps : nullptr, &r),
                  "bound verification");
            ReportH report(r);
            write_file(path_in(out, "report.txt"), take_string([&] {
                           char* s = nullptr;
                           check(cophik_report_to_text(report.get(), &s), "report");
                           return s;
                       }()));
            std::fprintf(stderr, "lhs %.17g rhs %.17g pass %s\n", cophik_report_lhs(report.get()),
                         cophik_report_rhs(report.get()), cophik_report_pass(report.get()) ? "true" : "false");
        } else if (bench->parsed()) {
            check(cophik_bench_branin(cfg.get(), out.c_str()), "benchmark");
        }
    } catch (const Failure& f) {
        std::fprintf(stderr, "error: %s\n", f.message.c_str());
        return exit_code(f.status);
    }
    return kExitOk;
}
