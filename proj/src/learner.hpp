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

#include <memory>
#include <string>

#include "cophik.hpp"
#include "text.hpp"

namespace cophik {

enum class LearnerKind { OrdinaryKriging, Phik, ModifiedPhik, Cophik };

std::string to_string(LearnerKind kind);
LearnerKind parse_learner(const std::string& name);
bool needs_ensemble(LearnerKind kind);

struct LearnerConfig {
    LearnerKind kind = LearnerKind::Cophik;
    CophikConfig settings;
};

/// A learner fitted to node observations on a grid.
class Surrogate {
public:
    virtual ~Surrogate() = default;

    virtual LearnerKind kind() const = 0;
    virtual const Grid& grid() const = 0;
    /// Observation locations and values the model was conditioned on.
    virtual const ObservationSet& observations() const = 0;
    virtual Prediction predict(std::size_t node) const = 0;
    /// Fitted parameters, sufficient (with the observations and ensemble) to
    /// rebuild the model exactly.
    virtual KeyValues parameters() const = 0;

    /// Posterior mean and variance fields on every node.
    std::pair<Field, Field> predict_grid() const;
};

/// Ensemble-based learners need every observation on a grid node; ordinary
/// Kriging accepts arbitrary locations.
std::unique_ptr<Surrogate> fit_learner(const LearnerConfig& cfg, const Grid& grid,
                                       std::shared_ptr<const Ensemble> ensemble, const ObservationSet& obs);
std::unique_ptr<Surrogate> fit_learner(const LearnerConfig& cfg, const Grid& grid,
                                       std::shared_ptr<const Ensemble> ensemble, const NodeObservations& obs);

/// Serialized model: learner, grid, observations and fitted parameters.
KeyValues model_to_key_values(const Surrogate& model);

/// Rebuilds a model written by model_to_key_values without re-optimizing.
std::unique_ptr<Surrogate> model_from_key_values(const KeyValues& kv, std::shared_ptr<const Ensemble> ensemble);

/// Access to the concrete model behind a surrogate (null if the kind differs).
const OrdinaryKriging* as_kriging(const Surrogate& s);
const PhikRegressor* as_phik(const Surrogate& s);
const CoPhikModel* as_cophik(const Surrogate& s);

}  // namespace cophik
