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

#include <cstdint>
#include <string>
#include <vector>

#include "learner.hpp"

namespace cophik {

/// Key-value run configuration. Every key is optional; unknown keys are
/// rejected. Defaults:
///
///   learner                  = cophik
///   length_lower_factor      = 0.01   (lower bound on l_i, times the axis extent)
///   length_upper_factor      = 100    (upper bound on l_i, times the axis extent)
///   optimizer_starts         = 10
///   optimizer_tolerance      = 1e-8
///   optimizer_max_iterations = 500
///   nugget_initial           = 1e-10  (relative to the mean diagonal)
///   nugget_growth            = 10
///   nugget_cap               = 1e-4   (relative to the mean diagonal)
///   rho_lower                = 0
///   rho_upper                = 2
///   rho_count                = 41
///   seed                     = 1
///   n_max                    = 24
///   members                  = 300
///   grid                     = 0:1:41,0:1:41
///   initial_observations     = 8
///   learners                 = kriging,phik,modified-phik,cophik
struct RunConfig {
    LearnerKind learner = LearnerKind::Cophik;
    OptimizerConfig optimizer;
    NuggetPolicy nugget;
    RhoSearchConfig rho;
    std::uint64_t seed = 1;
    std::size_t n_max = 24;
    std::size_t members = 300;
    std::string grid = "0:1:41,0:1:41";
    std::size_t initial_observations = 8;
    std::vector<LearnerKind> learners{LearnerKind::OrdinaryKriging, LearnerKind::Phik, LearnerKind::ModifiedPhik,
                                      LearnerKind::Cophik};

    static RunConfig parse(const std::string& text, const std::string& source);
    static RunConfig load(const std::string& path);

    void validate() const;
    /// Every setting, defaults included, in parseable form.
    KeyValues to_key_values() const;

    /// Learner settings for `kind`; the optimizer seed follows `seed`.
    LearnerConfig learner_config(LearnerKind kind) const;
    LearnerConfig learner_config() const { return learner_config(learner); }
};

}  // namespace cophik
