// Copyright 2026 The qgnn-d2d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qd2d/config.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qd2d/errors.h"

namespace qd2d {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

template <typename T>
void read_field(const json &obj, const char *key, T &dst) {
    if (obj.contains(key)) {
        try {
            dst = obj.at(key).get<T>();
        } catch (const json::exception &) {
            throw ConfigError(std::string("config field '") + key + "' has the wrong type: " + obj.at(key).dump());
        }
    }
}

const json &section(const json &root, const char *name) {
    static const json empty = json::object();
    if (!root.contains(name)) {
        return empty;
    }
    const json &s = root.at(name);
    if (!s.is_object()) {
        throw ConfigError(std::string("config section '") + name + "' must be an object");
    }
    return s;
}

void apply_override(json &root, const std::string &assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("override must look like section.key=value, got '" + assignment + "'");
    }
    std::string pointer = "/" + assignment.substr(0, eq);
    for (auto &c : pointer) {
        if (c == '.') {
            c = '/';
        }
    }
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::exception &) {
        value = raw;
    }
    root[json::json_pointer(pointer)] = std::move(value);
}

std::string resolve(const IoConfig &io, const std::string &file) {
    const fs::path p(file);
    if (p.is_absolute()) {
        return p.string();
    }
    return (fs::path(io.output_dir) / p).string();
}

}  // namespace

void ExperimentConfig::validate() const {
    if (scenario.M < 1) {
        throw ConfigError("scenario.M must be >= 1");
    }
    if (!(scenario.d_min > 0.0) || scenario.d_min > scenario.d_max || scenario.d_max > scenario.d) {
        throw ConfigError("scenario needs 0 < d_min <= d_max <= d");
    }
    if (!(scenario.sigma2 > 0.0) || !(scenario.p_max > 0.0) || !(scenario.pathloss_exponent >= 0.0)) {
        throw ConfigError("scenario needs sigma2 > 0, p_max > 0, pathloss_exponent >= 0");
    }
    scenario.resolved_alpha();
    if (model.arch != "qgnn" && model.arch != "gcn") {
        throw ConfigError("model.arch must be 'qgnn' or 'gcn', got '" + model.arch + "'");
    }
    model.qgnn.validate();
    model.gcn.validate();
    if (model.qgnn.F != kNodeFeatures || model.gcn.F != kNodeFeatures) {
        throw ConfigError("model.F must be " + std::to_string(kNodeFeatures) + " (node features are direct gain and weight)");
    }
    train.validate();
}

std::string ExperimentConfig::dataset_path() const { return resolve(io, io.dataset); }

std::string ExperimentConfig::checkpoint_path() const {
    return resolve(io, io.checkpoint.empty() ? model.arch + ".ckpt.json" : io.checkpoint);
}

std::string ExperimentConfig::report_path() const {
    return resolve(io, io.report.empty() ? model.arch + "_report.csv" : io.report);
}

ExperimentConfig parse_config(const std::string &text, std::span<const std::string> overrides) {
    json root;
    try {
        root = text.empty() ? json::object() : json::parse(text);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    try {
        for (const auto &o : overrides) {
            apply_override(root, o);
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("bad override: ") + e.what());
    }
    if (root.contains("version") && root.at("version") != kConfigVersion) {
        throw ConfigError("unsupported config version " + root.at("version").dump());
    }

    ExperimentConfig cfg;
    const json &sc = section(root, "scenario");
    read_field(sc, "M", cfg.scenario.M);
    read_field(sc, "d", cfg.scenario.d);
    read_field(sc, "d_min", cfg.scenario.d_min);
    read_field(sc, "d_max", cfg.scenario.d_max);
    read_field(sc, "pathloss_exponent", cfg.scenario.pathloss_exponent);
    read_field(sc, "rayleigh", cfg.scenario.rayleigh);
    read_field(sc, "sigma2", cfg.scenario.sigma2);
    read_field(sc, "alpha", cfg.scenario.alpha);
    read_field(sc, "p_max", cfg.scenario.p_max);

    const json &m = section(root, "model");
    read_field(m, "arch", cfg.model.arch);
    int F = kNodeFeatures;
    read_field(m, "F", F);
    cfg.model.qgnn.F = cfg.model.gcn.F = F;
    read_field(m, "L", cfg.model.qgnn.L);
    read_field(m, "depth", cfg.model.qgnn.depth);
    read_field(m, "k", cfg.model.qgnn.k);
    read_field(m, "H", cfg.model.gcn.H);
    read_field(m, "L_c", cfg.model.gcn.Lc);

    const json &t = section(root, "train");
    auto &tc = cfg.train;
    read_field(t, "epochs", tc.epochs);
    read_field(t, "lr", tc.adam.lr);
    read_field(t, "beta1", tc.adam.beta1);
    read_field(t, "beta2", tc.adam.beta2);
    read_field(t, "eps", tc.adam.eps);
    read_field(t, "batch", tc.batch);
    read_field(t, "train_size", tc.train_size);
    read_field(t, "test_size", tc.test_size);
    read_field(t, "wmmse_max_iter", tc.wmmse.max_iter);
    read_field(t, "wmmse_tol", tc.wmmse.tol);
    read_field(t, "threads", tc.threads);
    const json &seeds = section(t, "seeds");
    read_field(seeds, "data", tc.seeds.data);
    read_field(seeds, "init", tc.seeds.init);
    read_field(seeds, "stars", tc.seeds.stars);

    const json &io = section(root, "io");
    read_field(io, "output_dir", cfg.io.output_dir);
    read_field(io, "dataset", cfg.io.dataset);
    read_field(io, "checkpoint", cfg.io.checkpoint);
    read_field(io, "report", cfg.io.report);
    read_field(io, "record_timing", cfg.io.record_timing);
    if (const char *env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') {
        cfg.io.output_dir = env;
    }

    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string &path, std::span<const std::string> overrides) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides);
}

std::string dump_config(const ExperimentConfig &cfg) {
    const auto &s = cfg.scenario;
    const auto &t = cfg.train;
    json root{
        {"version", kConfigVersion},
        {"scenario",
         {{"M", s.M},
          {"d", s.d},
          {"d_min", s.d_min},
          {"d_max", s.d_max},
          {"pathloss_exponent", s.pathloss_exponent},
          {"rayleigh", s.rayleigh},
          {"sigma2", s.sigma2},
          {"alpha", s.resolved_alpha()},
          {"p_max", s.p_max}}},
        {"model",
         {{"arch", cfg.model.arch},
          {"F", cfg.model.qgnn.F},
          {"L", cfg.model.qgnn.L},
          {"depth", cfg.model.qgnn.depth},
          {"k", cfg.model.qgnn.k},
          {"H", cfg.model.gcn.H},
          {"L_c", cfg.model.gcn.Lc}}},
        {"train",
         {{"epochs", t.epochs},
          {"lr", t.adam.lr},
          {"beta1", t.adam.beta1},
          {"beta2", t.adam.beta2},
          {"eps", t.adam.eps},
          {"batch", t.batch},
          {"train_size", t.train_size},
          {"test_size", t.test_size},
          {"wmmse_max_iter", t.wmmse.max_iter},
          {"wmmse_tol", t.wmmse.tol},
          {"threads", t.threads},
          {"seeds", {{"data", t.seeds.data}, {"init", t.seeds.init}, {"stars", t.seeds.stars}}}}},
        {"io",
         {{"output_dir", cfg.io.output_dir},
          {"dataset", cfg.io.dataset},
          {"checkpoint", cfg.io.checkpoint},
          {"report", cfg.io.report},
          {"record_timing", cfg.io.record_timing}}},
    };
    return root.dump(2);
}

}  // namespace qd2d
