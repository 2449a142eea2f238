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

#pragma once

#include <span>
#include <string>
#include <vector>

#include "qd2d/dataset.h"
#include "qd2d/gcn.h"
#include "qd2d/qgnn.h"
#include "qd2d/trainer.h"

namespace qd2d {

inline constexpr int kConfigVersion = 1;

struct ModelConfig {
    std::string arch = "qgnn";  // qgnn | gcn
    QgnnArch qgnn;
    GcnArch gcn;
};

struct IoConfig {
    std::string output_dir = "out";
    std::string dataset = "dataset.jsonl";
    std::string checkpoint;  // default: <arch>.ckpt.json
    std::string report;      // default: <arch>_report.csv
    bool record_timing = false;
};

/// One experiment, as read from a JSON config file:
///
///   { "version": 1,
///     "scenario": { "M", "d", "d_min", "d_max", "pathloss_exponent", "rayleigh",
///                   "sigma2", "alpha", "p_max" },
///     "model":    { "arch", "F", "L", "depth", "k", "H", "L_c" },
///     "train":    { "epochs", "lr", "batch", "train_size", "test_size",
///                   "seeds": { "data", "init", "stars" },
///                   "beta1", "beta2", "eps", "wmmse_max_iter", "wmmse_tol", "threads" },
///     "io":       { "output_dir", "dataset", "checkpoint", "report", "record_timing" } }
///
/// Every field is optional and falls back to the defaults in the structs.
/// Relative io paths are resolved against output_dir.
struct ExperimentConfig {
    ScenarioConfig scenario;
    ModelConfig model;
    TrainConfig train;
    IoConfig io;

    void validate() const;

    std::string dataset_path() const;
    std::string checkpoint_path() const;
    std::string report_path() const;
};

/// Environment variable that, when set, replaces io.output_dir.
inline constexpr const char *kOutputDirEnv = "QD2D_OUTPUT_DIR";

/// Parses config text and applies "dotted.key=value" overrides, where value
/// is a JSON literal or a bare string. Throws ConfigError.
ExperimentConfig parse_config(const std::string &text, std::span<const std::string> overrides = {});
ExperimentConfig load_config(const std::string &path, std::span<const std::string> overrides = {});

std::string dump_config(const ExperimentConfig &cfg);

}  // namespace qd2d
