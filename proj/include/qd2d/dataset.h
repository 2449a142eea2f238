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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qd2d/channel_model.h"

namespace qd2d {

inline constexpr int kDatasetFormatVersion = 1;
inline constexpr int kGeneratorVersion = 1;

/// Everything needed to draw realizations. Defaults are the desk-scale setup.
struct ScenarioConfig {
    int M = 4;
    double d = 100.0;
    double d_min = 2.0;
    double d_max = 10.0;
    double pathloss_exponent = 3.0;
    bool rayleigh = true;
    double sigma2 = 1e-2;
    std::vector<double> alpha;  // empty means all ones
    double p_max = 1.0;

    std::vector<double> resolved_alpha() const;
};

struct Dataset {
    ScenarioConfig scenario;
    std::uint64_t seed = 0;
    std::vector<ChannelRealization> train;
    std::vector<ChannelRealization> test;
};

/// Realization i uses its own scenario and fading streams derived from seed,
/// so the train split is a prefix-stable function of (scenario, seed).
ChannelRealization draw_realization(const ScenarioConfig &cfg, std::uint64_t seed, std::uint64_t index);

Dataset generate_dataset(const ScenarioConfig &cfg, int train_size, int test_size, std::uint64_t seed);

/// Line-delimited JSON: one header line, then one line per realization.
void write_dataset(std::ostream &out, const Dataset &ds);
void write_dataset(const std::string &path, const Dataset &ds);
Dataset read_dataset(std::istream &in);
Dataset read_dataset(const std::string &path);

}  // namespace qd2d
