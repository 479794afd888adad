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

#include "active_learning.hpp"

namespace cophik {

/// Field file: header "#field dim=<d> axes=<n1,...> bounds=<l1:u1,...>"
/// followed by one shortest-round-trip value per line in node order.
std::string field_header(const Grid& grid);
Grid parse_field_header(const std::string& line);
std::string format_field(const Field& f);
Field parse_field(const std::string& text, const std::string& source);
Field read_field(const std::string& path);
void write_field(const std::string& path, const Field& f);

struct EnsembleManifest {
    std::size_t members = 0;
    Grid grid;
    std::string generator;
    std::uint64_t seed = 0;
    std::vector<std::string> files;

    KeyValues to_key_values() const;
    static EnsembleManifest from_key_values(const KeyValues& kv);
};

std::string member_file_name(std::size_t m);
/// Writes member_0000.fld ... and manifest.txt into `dir` (created if needed).
EnsembleManifest write_ensemble(const std::string& dir, const Ensemble& ens, const std::string& generator,
                                std::uint64_t seed);
Ensemble read_ensemble(const std::string& dir, EnsembleManifest* manifest = nullptr);

/// CSV with header "x0,...,x<d-1>,value".
std::string format_observations(const ObservationSet& obs);
ObservationSet parse_observations(const std::string& text, const std::string& source);
ObservationSet read_observations(const std::string& path);
void write_observations(const std::string& path, const ObservationSet& obs);

/// One row per added observation: step, node coordinates, value, max MSE,
/// relative error after the refit.
std::string format_trajectory(const LearningTrajectory& t, const Grid& grid);

void ensure_directory(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

}  // namespace cophik
