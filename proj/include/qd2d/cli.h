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

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "qd2d/config.h"
#include "qd2d/trainer.h"

namespace qd2d {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

struct GenSummary {
    std::string path;
    std::size_t train_records = 0;
    std::size_t test_records = 0;
};

/// Draws train+test realizations and writes them to cfg.dataset_path().
GenSummary cmd_gen(const ExperimentConfig &cfg, std::ostream &log);

/// Trains cfg.model.arch on the dataset file; writes the report CSV and
/// the checkpoint.
TrainReport cmd_train(const ExperimentConfig &cfg, std::ostream &log);

struct EvalSummary {
    std::string arch;
    std::size_t instances = 0;
    double model_mean = 0.0;
    double wmmse_mean = 0.0;
    std::optional<double> oracle_mean;
};

/// Evaluates a checkpoint on the test split. Throws CheckpointMismatch when
/// the checkpoint architecture disagrees with cfg.model.
EvalSummary cmd_eval(const ExperimentConfig &cfg, const std::string &checkpoint_path,
                     std::optional<int> oracle_levels, std::ostream &log);

/// Columns: epoch, train_mean_bpshz, test_mean_bpshz, wmmse_test_mean_bpshz,
/// seconds. Row 0 is the untrained model. The seconds column is left empty
/// unless timing is requested, so reruns stay byte-identical.
void write_report_csv(std::ostream &out, const TrainReport &report, bool record_timing);

/// Entry point for the qd2d executable: gen | train | eval.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qd2d
