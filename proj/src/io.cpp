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

#include "io.hpp"

#include <filesystem>
#include <sstream>

namespace cophik {

namespace {

std::string after_prefix(const std::string& token, const std::string& prefix, const std::string& line) {
    if (token.rfind(prefix, 0) != 0) throw IoError("malformed field header '" + line + "'");
    return token.substr(prefix.size());
}

}  // namespace

std::string field_header(const Grid& grid) {
    std::string axes, bounds;
    for (std::size_t k = 0; k < grid.dim(); ++k) {
        const Axis& a = grid.axis(k);
        if (k) {
            axes += ',';
            bounds += ',';
        }
        axes += std::to_string(a.count);
        bounds += format_double(a.lower) + ':' + format_double(a.upper);
    }
    return "#field dim=" + std::to_string(grid.dim()) + " axes=" + axes + " bounds=" + bounds;
}

Grid parse_field_header(const std::string& line) {
    std::istringstream in(line);
    std::string tag, dim_tok, axes_tok, bounds_tok, extra;
    if (!(in >> tag >> dim_tok >> axes_tok >> bounds_tok) || tag != "#field" || (in >> extra))
        throw IoError("malformed field header '" + line + "'");
    try {
        const auto dim = parse_uint(after_prefix(dim_tok, "dim=", line));
        const auto counts = split(after_prefix(axes_tok, "axes=", line), ',');
        const auto bounds = split(after_prefix(bounds_tok, "bounds=", line), ',');
        if (counts.size() != dim || bounds.size() != dim) throw IoError("field header dimension mismatch in '" + line + "'");
        std::vector<Axis> axes;
        for (std::size_t k = 0; k < dim; ++k) {
            const auto lu = split(bounds[k], ':');
            if (lu.size() != 2) throw IoError("malformed bounds in '" + line + "'");
            axes.push_back(Axis{parse_double(lu[0]), parse_double(lu[1]), static_cast<std::size_t>(parse_uint(counts[k]))});
        }
        return Grid(std::move(axes));
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw IoError("invalid field header '" + line + "': " + e.what());
    }
}

std::string format_field(const Field& f) {
    std::string out = field_header(f.grid());
    out += '\n';
    for (double v : f.values()) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

Field parse_field(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError(source + ": empty field file");
    const Grid grid = parse_field_header(trim(line));
    std::vector<double> values;
    values.reserve(grid.node_count());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        try {
            values.push_back(parse_double(t));
        } catch (const Error& e) {
            throw IoError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (values.size() != grid.node_count())
        throw IoError(source + ": expected " + std::to_string(grid.node_count()) + " values, found " +
                      std::to_string(values.size()));
    return Field(grid, std::move(values));
}

Field read_field(const std::string& path) { return parse_field(read_text_file(path), path); }

void write_field(const std::string& path, const Field& f) { write_text_file(path, format_field(f)); }

KeyValues EnsembleManifest::to_key_values() const {
    KeyValues kv{{"members", std::to_string(members)},
                 {"grid", field_header(grid)},
                 {"generator", generator},
                 {"seed", std::to_string(seed)}};
    for (const auto& f : files) kv.emplace_back("file", f);
    return kv;
}

EnsembleManifest EnsembleManifest::from_key_values(const KeyValues& kv) {
    EnsembleManifest m;
    bool has_members = false, has_grid = false;
    for (const auto& [k, v] : kv) {
        if (k == "members") {
            m.members = static_cast<std::size_t>(parse_uint(v));
            has_members = true;
        } else if (k == "grid") {
            m.grid = parse_field_header(v);
            has_grid = true;
        } else if (k == "generator") {
            m.generator = v;
        } else if (k == "seed") {
            m.seed = parse_uint(v);
        } else if (k == "file") {
            m.files.push_back(v);
        } else {
            throw IoError("unknown manifest key '" + k + "'");
        }
    }
    if (!has_members || !has_grid) throw IoError("manifest needs 'members' and 'grid'");
    if (m.files.size() != m.members) throw IoError("manifest lists " + std::to_string(m.files.size()) +
                                                   " files for " + std::to_string(m.members) + " members");
    return m;
}

std::string member_file_name(std::size_t m) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "member_%04zu.fld", m);
    return buf;
}

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

EnsembleManifest write_ensemble(const std::string& dir, const Ensemble& ens, const std::string& generator,
                                std::uint64_t seed) {
    ensure_directory(dir);
    EnsembleManifest m;
    m.members = ens.size();
    m.grid = ens.grid();
    m.generator = generator;
    m.seed = seed;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        m.files.push_back(member_file_name(i));
        write_field(join_path(dir, m.files.back()), ens.member(i));
    }
    write_text_file(join_path(dir, "manifest.txt"), format_key_values(m.to_key_values()));
    return m;
}

Ensemble read_ensemble(const std::string& dir, EnsembleManifest* manifest) {
    const std::string path = join_path(dir, "manifest.txt");
    EnsembleManifest m = EnsembleManifest::from_key_values(parse_key_values(read_text_file(path), path));
    std::vector<Field> fields;
    fields.reserve(m.members);
    for (const auto& f : m.files) {
        fields.push_back(read_field(join_path(dir, f)));
        if (!(fields.back().grid() == m.grid)) throw IoError("member file '" + f + "' grid differs from the manifest");
    }
    if (fields.empty()) throw IoError(path + ": ensemble has no members");
    if (manifest) *manifest = m;
    return Ensemble::from_fields(fields);
}

std::string format_observations(const ObservationSet& obs) {
    std::string out;
    for (std::size_t k = 0; k < obs.dim(); ++k) out += "x" + std::to_string(k) + ",";
    out += "value\n";
    for (std::size_t i = 0; i < obs.size(); ++i) {
        for (Eigen::Index k = 0; k < obs.location(i).size(); ++k) out += format_double(obs.location(i)[k]) + ",";
        out += format_double(obs.values()[static_cast<Eigen::Index>(i)]) + "\n";
    }
    return out;
}

ObservationSet parse_observations(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    std::size_t width = 0;
    std::vector<Point> locations;
    std::vector<double> values;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        auto cells = split(t, ',');
        if (width == 0) {
            width = cells.size();
            if (width < 2 || trim(cells.back()) != "value")
                throw IoError(source + ":" + std::to_string(lineno) + ": header must name coordinate columns then 'value'");
            continue;
        }
        if (cells.size() != width)
            throw IoError(source + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) + " columns");
        try {
            Point x(static_cast<Eigen::Index>(width - 1));
            for (std::size_t k = 0; k + 1 < width; ++k) x[static_cast<Eigen::Index>(k)] = parse_double(cells[k]);
            locations.push_back(std::move(x));
            values.push_back(parse_double(cells.back()));
        } catch (const Error& e) {
            throw IoError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (width == 0) throw IoError(source + ": missing header row");
    if (locations.empty()) throw IoError(source + ": no observations");
    try {
        return ObservationSet(std::move(locations), Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size())));
    } catch (const IoError&) {
        throw;
    } catch (const Error& e) {
        throw IoError(source + ": " + e.what());
    }
}

ObservationSet read_observations(const std::string& path) { return parse_observations(read_text_file(path), path); }

void write_observations(const std::string& path, const ObservationSet& obs) {
    write_text_file(path, format_observations(obs));
}

std::string format_trajectory(const LearningTrajectory& t, const Grid& grid) {
    std::string out = "step,";
    for (std::size_t k = 0; k < grid.dim(); ++k) out += "x" + std::to_string(k) + ",";
    out += "value,max_mse,relative_error\n";
    for (std::size_t s = 0; s < t.steps.size(); ++s) {
        const auto& st = t.steps[s];
        out += std::to_string(s + 1) + ",";
        const Point x = grid.node(st.node);
        for (Eigen::Index k = 0; k < x.size(); ++k) out += format_double(x[k]) + ",";
        out += format_double(st.value) + "," + format_double(st.max_mse) + "," + format_double(st.relative_error) + "\n";
    }
    return out;
}

}  // namespace cophik
