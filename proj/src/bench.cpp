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

#include "bench.hpp"

#include "rng.hpp"

namespace cophik {

BenchmarkConfig BenchmarkConfig::from_run_config(const RunConfig& rc) {
    const Grid g = Grid::parse(rc.grid);
    if (g.dim() != 2 || g.axis(0).count != g.axis(1).count || !(g == branin_grid(g.axis(0).count)))
        throw ConfigError("the benchmark needs a square grid on [0,1]^2");
    BenchmarkConfig c;
    c.grid_nodes = g.axis(0).count;
    c.members = rc.members;
    c.initial_observations = rc.initial_observations;
    c.n_max = rc.n_max;
    c.seed = rc.seed;
    c.learners = rc.learners;
    c.settings = rc;
    return c;
}

BenchmarkRun run_benchmark(const BenchmarkConfig& cfg) {
    if (cfg.n_max < cfg.initial_observations) throw ConfigError("n_max is smaller than the initial observation count");
    const Grid grid = branin_grid(cfg.grid_nodes);
    BenchmarkRun run;
    run.reference = branin_reference(grid);
    run.ensemble = std::make_shared<const Ensemble>(generate_ensemble(grid, cfg.members, cfg.seed));
    run.ensemble_mean_error = relative_error(EnsembleGp::from_ensemble(*run.ensemble).mean_field(), run.reference);
    run.initial_nodes = sample_nodes(grid, cfg.initial_observations, substream_seed(cfg.seed, kObservationStream));
    const NodeObservations initial = observe(run.reference, run.initial_nodes);

    RunConfig settings = cfg.settings;
    settings.seed = cfg.seed;
    for (LearnerKind kind : cfg.learners) {
        auto ens = needs_ensemble(kind) ? run.ensemble : nullptr;
        run.trajectories.push_back(active_learn(settings.learner_config(kind), run.reference, ens, initial, cfg.n_max));
    }
    return run;
}

}  // namespace cophik
