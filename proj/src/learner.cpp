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

#include "learner.hpp"

#include <map>

#include "parallel.hpp"

namespace cophik {

namespace {

std::string join(const Vector& v) {
    std::string s;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_double(v[i]);
    }
    return s;
}

Vector parse_list(const std::string& s) {
    auto parts = split(s, ',');
    Vector v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_double(parts[i]);
    return v;
}

class KrigingSurrogate final : public Surrogate {
public:
    KrigingSurrogate(Grid grid, OrdinaryKriging model) : grid_(std::move(grid)), model_(std::move(model)) {}

    LearnerKind kind() const override { return LearnerKind::OrdinaryKriging; }
    const Grid& grid() const override { return grid_; }
    const ObservationSet& observations() const override { return model_.observations(); }
    Prediction predict(std::size_t node) const override { return model_.predict(grid_.node(node)); }
    KeyValues parameters() const override {
        return {{"lengths", join(model_.lengths())},
                {"nugget", format_double(model_.psi().nugget())},
                {"mu_hat", format_double(model_.mu_hat())},
                {"sigma2_hat", format_double(model_.sigma2_hat())},
                {"log_likelihood", format_double(model_.log_likelihood())}};
    }
    const OrdinaryKriging& model() const { return model_; }

private:
    Grid grid_;
    OrdinaryKriging model_;
};

class PhikSurrogate final : public Surrogate {
public:
    PhikSurrogate(LearnerKind kind, PhikRegressor model)
        : kind_(kind), model_(std::move(model)), points_(model_.observations().to_points(model_.prior().grid())) {}

    LearnerKind kind() const override { return kind_; }
    const Grid& grid() const override { return model_.prior().grid(); }
    const ObservationSet& observations() const override { return points_; }
    Prediction predict(std::size_t node) const override { return model_.predict(node); }
    KeyValues parameters() const override {
        return {{"nugget", format_double(model_.factorization().nugget())},
                {"delta_mu", format_double(model_.delta_mu())},
                {"log_likelihood", format_double(model_.log_likelihood())}};
    }
    const PhikRegressor& model() const { return model_; }

private:
    LearnerKind kind_;
    PhikRegressor model_;
    ObservationSet points_;
};

class CophikSurrogate final : public Surrogate {
public:
    explicit CophikSurrogate(CoPhikModel model)
        : model_(std::move(model)), points_(model_.observations().to_points(model_.ensemble().grid())) {}

    LearnerKind kind() const override { return LearnerKind::Cophik; }
    const Grid& grid() const override { return model_.ensemble().grid(); }
    const ObservationSet& observations() const override { return points_; }
    Prediction predict(std::size_t node) const override { return model_.predict(node); }
    KeyValues parameters() const override {
        const auto& p = model_.parameters();
        return {{"rho", format_double(p.rho)},
                {"sigma2_d", format_double(p.d_params.sigma2)},
                {"lengths_d", join(p.d_params.lengths)},
                {"mu_d", format_double(p.mu_d)},
                {"y_low_source", p.member ? std::to_string(*p.member) : std::string("mean")},
                {"nugget_low", format_double(p.nugget_low)},
                {"nugget_d", format_double(p.nugget_d)},
                {"joint_log_likelihood", format_double(model_.joint_log_likelihood())}};
    }
    const CoPhikModel& model() const { return model_; }

private:
    CoPhikModel model_;
    ObservationSet points_;
};

void require_ensemble(LearnerKind kind, const std::shared_ptr<const Ensemble>& ens, const Grid& grid) {
    if (needs_ensemble(kind)) {
        if (!ens) throw ConfigError("learner '" + to_string(kind) + "' requires an ensemble");
        if (!(ens->grid() == grid)) throw DimensionError("ensemble grid differs from the prediction grid");
    } else if (ens) {
        throw ConfigError("learner '" + to_string(kind) + "' does not take an ensemble");
    }
}

}  // namespace

std::string to_string(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::OrdinaryKriging: return "kriging";
        case LearnerKind::Phik: return "phik";
        case LearnerKind::ModifiedPhik: return "modified-phik";
        case LearnerKind::Cophik: return "cophik";
    }
    return "unknown";
}

LearnerKind parse_learner(const std::string& name) {
    if (name == "kriging" || name == "ordinary-kriging") return LearnerKind::OrdinaryKriging;
    if (name == "phik") return LearnerKind::Phik;
    if (name == "modified-phik") return LearnerKind::ModifiedPhik;
    if (name == "cophik") return LearnerKind::Cophik;
    throw ConfigError("unknown learner '" + name + "'");
}

bool needs_ensemble(LearnerKind kind) { return kind != LearnerKind::OrdinaryKriging; }

std::pair<Field, Field> Surrogate::predict_grid() const {
    const auto n = grid().node_count();
    std::vector<double> mean(n), var(n);
    parallel_for(n, [&](std::size_t i) {
        auto p = predict(i);
        mean[i] = p.mean;
        var[i] = p.variance;
    });
    return {Field(grid(), std::move(mean)), Field(grid(), std::move(var))};
}

std::unique_ptr<Surrogate> fit_learner(const LearnerConfig& cfg, const Grid& grid,
                                       std::shared_ptr<const Ensemble> ensemble, const ObservationSet& obs) {
    require_ensemble(cfg.kind, ensemble, grid);
    const auto& s = cfg.settings;
    switch (cfg.kind) {
        case LearnerKind::OrdinaryKriging: {
            auto extents = grid.extents();
            return std::make_unique<KrigingSurrogate>(grid, fit_hyperparameters(obs, extents, s.optimizer, s.nugget));
        }
        case LearnerKind::Phik:
        case LearnerKind::ModifiedPhik: {
            auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(*ensemble));
            return std::make_unique<PhikSurrogate>(
                cfg.kind, PhikRegressor(prior, on_nodes(grid, obs), cfg.kind == LearnerKind::ModifiedPhik, s.nugget));
        }
        case LearnerKind::Cophik:
            return std::make_unique<CophikSurrogate>(CoPhikModel::fit(std::move(ensemble), on_nodes(grid, obs), s));
    }
    throw ConfigError("unsupported learner");
}

std::unique_ptr<Surrogate> fit_learner(const LearnerConfig& cfg, const Grid& grid,
                                       std::shared_ptr<const Ensemble> ensemble, const NodeObservations& obs) {
    return fit_learner(cfg, grid, std::move(ensemble), obs.to_points(grid));
}

KeyValues model_to_key_values(const Surrogate& model) {
    KeyValues kv;
    kv.emplace_back("learner", to_string(model.kind()));
    kv.emplace_back("grid", model.grid().spec());
    const auto& obs = model.observations();
    kv.emplace_back("observations", std::to_string(obs.size()));
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const Point& x = obs.location(i);
        Vector row(x.size() + 1);
        row.head(x.size()) = x;
        row[x.size()] = obs.values()[static_cast<Eigen::Index>(i)];
        kv.emplace_back("obs", join(row));
    }
    for (auto& p : model.parameters()) kv.push_back(std::move(p));
    return kv;
}

std::unique_ptr<Surrogate> model_from_key_values(const KeyValues& kv, std::shared_ptr<const Ensemble> ensemble) {
    std::map<std::string, std::string> single;
    std::vector<std::string> obs_rows;
    for (const auto& [k, v] : kv) {
        if (k == "obs")
            obs_rows.push_back(v);
        else
            single[k] = v;
    }
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = single.find(key);
        if (it == single.end()) throw ConfigError("model file is missing '" + key + "'");
        return it->second;
    };
    const LearnerKind kind = parse_learner(get("learner"));
    const Grid grid = Grid::parse(get("grid"));
    require_ensemble(kind, ensemble, grid);
    if (parse_uint(get("observations")) != obs_rows.size()) throw ConfigError("model observation count mismatch");

    std::vector<Point> locations;
    Vector values(static_cast<Eigen::Index>(obs_rows.size()));
    for (std::size_t i = 0; i < obs_rows.size(); ++i) {
        Vector row = parse_list(obs_rows[i]);
        if (static_cast<std::size_t>(row.size()) != grid.dim() + 1) throw ConfigError("model observation row has wrong width");
        locations.push_back(row.head(row.size() - 1));
        values[static_cast<Eigen::Index>(i)] = row[row.size() - 1];
    }
    const ObservationSet points(std::move(locations), std::move(values));

    switch (kind) {
        case LearnerKind::OrdinaryKriging: {
            OrdinaryKriging m(points, parse_list(get("lengths")), {}, parse_double(get("nugget")));
            return std::make_unique<KrigingSurrogate>(grid, std::move(m));
        }
        case LearnerKind::Phik:
        case LearnerKind::ModifiedPhik: {
            auto prior = std::make_shared<const EnsembleGp>(EnsembleGp::from_ensemble(*ensemble));
            return std::make_unique<PhikSurrogate>(
                kind, PhikRegressor(prior, on_nodes(grid, points), kind == LearnerKind::ModifiedPhik, {},
                                    parse_double(get("nugget"))));
        }
        case LearnerKind::Cophik: {
            CoPhikModel::Parameters p;
            p.rho = parse_double(get("rho"));
            p.d_params.sigma2 = parse_double(get("sigma2_d"));
            p.d_params.lengths = parse_list(get("lengths_d"));
            p.mu_d = parse_double(get("mu_d"));
            const auto& src = get("y_low_source");
            if (src != "mean") p.member = static_cast<std::size_t>(parse_uint(src));
            p.nugget_low = parse_double(get("nugget_low"));
            p.nugget_d = parse_double(get("nugget_d"));
            return std::make_unique<CophikSurrogate>(CoPhikModel::rebuild(std::move(ensemble), on_nodes(grid, points), p));
        }
    }
    throw ConfigError("unsupported learner");
}

const OrdinaryKriging* as_kriging(const Surrogate& s) {
    auto* k = dynamic_cast<const KrigingSurrogate*>(&s);
    return k ? &k->model() : nullptr;
}

const PhikRegressor* as_phik(const Surrogate& s) {
    auto* k = dynamic_cast<const PhikSurrogate*>(&s);
    return k ? &k->model() : nullptr;
}

const CoPhikModel* as_cophik(const Surrogate& s) {
    auto* k = dynamic_cast<const CophikSurrogate*>(&s);
    return k ? &k->model() : nullptr;
}

}  // namespace cophik
