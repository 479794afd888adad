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

#include "config.hpp"

#include <functional>
#include <map>

namespace cophik {

namespace {

int parse_int(const std::string& v) {
    const auto u = parse_uint(v);
    if (u > 1000000000ULL) throw ConfigError("integer '" + v + "' is too large");
    return static_cast<int>(u);
}

std::vector<LearnerKind> parse_learner_list(const std::string& v) {
    std::vector<LearnerKind> out;
    for (const auto& s : split(v, ',')) out.push_back(parse_learner(trim(s)));
    if (out.empty()) throw ConfigError("learner list is empty");
    return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text, const std::string& source) {
    RunConfig c;
    using Setter = std::function<void(const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"learner", [&](const std::string& v) { c.learner = parse_learner(v); }},
        {"length_lower_factor", [&](const std::string& v) { c.optimizer.lower_factor = parse_double(v); }},
        {"length_upper_factor", [&](const std::string& v) { c.optimizer.upper_factor = parse_double(v); }},
        {"optimizer_starts", [&](const std::string& v) { c.optimizer.starts = parse_int(v); }},
        {"optimizer_tolerance", [&](const std::string& v) { c.optimizer.tolerance = parse_double(v); }},
        {"optimizer_max_iterations", [&](const std::string& v) { c.optimizer.max_iterations = parse_int(v); }},
        {"nugget_initial", [&](const std::string& v) { c.nugget.initial = parse_double(v); }},
        {"nugget_growth", [&](const std::string& v) { c.nugget.growth = parse_double(v); }},
        {"nugget_cap", [&](const std::string& v) { c.nugget.cap = parse_double(v); }},
        {"rho_lower", [&](const std::string& v) { c.rho.lower = parse_double(v); }},
        {"rho_upper", [&](const std::string& v) { c.rho.upper = parse_double(v); }},
        {"rho_count", [&](const std::string& v) { c.rho.count = parse_int(v); }},
        {"seed", [&](const std::string& v) { c.seed = parse_uint(v); }},
        {"n_max", [&](const std::string& v) { c.n_max = static_cast<std::size_t>(parse_uint(v)); }},
        {"members", [&](const std::string& v) { c.members = static_cast<std::size_t>(parse_uint(v)); }},
        {"grid", [&](const std::string& v) { c.grid = Grid::parse(v).spec(); }},
        {"initial_observations", [&](const std::string& v) { c.initial_observations = static_cast<std::size_t>(parse_uint(v)); }},
        {"learners", [&](const std::string& v) { c.learners = parse_learner_list(v); }},
    };
    for (const auto& [key, value] : parse_key_values(text, source)) {
        auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError(source + ": unknown configuration key '" + key + "'");
        try {
            it->second(value);
        } catch (const Error& e) {
            throw ConfigError(source + ": invalid value for '" + key + "': " + e.what());
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::load(const std::string& path) { return parse(read_text_file(path), path); }

void RunConfig::validate() const {
    optimizer.validate();
    nugget.validate();
    rho.validate();
    if (members < 2) throw ConfigError("members must be at least 2");
    if (initial_observations < 1) throw ConfigError("initial_observations must be at least 1");
    if (n_max < initial_observations) throw ConfigError("n_max must be at least initial_observations");
    (void)Grid::parse(grid);
}

KeyValues RunConfig::to_key_values() const {
    std::string list;
    for (std::size_t i = 0; i < learners.size(); ++i) list += (i ? "," : "") + to_string(learners[i]);
    return {{"learner", to_string(learner)},
            {"length_lower_factor", format_double(optimizer.lower_factor)},
            {"length_upper_factor", format_double(optimizer.upper_factor)},
            {"optimizer_starts", std::to_string(optimizer.starts)},
            {"optimizer_tolerance", format_double(optimizer.tolerance)},
            {"optimizer_max_iterations", std::to_string(optimizer.max_iterations)},
            {"nugget_initial", format_double(nugget.initial)},
            {"nugget_growth", format_double(nugget.growth)},
            {"nugget_cap", format_double(nugget.cap)},
            {"rho_lower", format_double(rho.lower)},
            {"rho_upper", format_double(rho.upper)},
            {"rho_count", std::to_string(rho.count)},
            {"seed", std::to_string(seed)},
            {"n_max", std::to_string(n_max)},
            {"members", std::to_string(members)},
            {"grid", grid},
            {"initial_observations", std::to_string(initial_observations)},
            {"learners", list}};
}

LearnerConfig RunConfig::learner_config(LearnerKind kind) const {
    LearnerConfig lc;
    lc.kind = kind;
    lc.settings.optimizer = optimizer;
    lc.settings.optimizer.seed = seed;
    lc.settings.nugget = nugget;
    lc.settings.rho = rho;
    return lc;
}

}  // namespace cophik
