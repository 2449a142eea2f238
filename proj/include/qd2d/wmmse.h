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
#include <vector>

#include "qd2d/channel_model.h"

namespace qd2d {

enum class WmmseInit { FullPower, Random };

struct WmmseConfig {
    int max_iter = 100;
    double tol = 1e-6;
    WmmseInit init = WmmseInit::FullPower;
    std::uint64_t seed = 0;  // only used by WmmseInit::Random

    void validate() const;
};

struct WmmseResult {
    PowerVector p;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Objective at the initial point followed by one entry per sweep.
    std::vector<double> trajectory;
};

/// Scalar WMMSE for single-antenna interference channels.
WmmseResult wmmse_allocate(const ChannelRealization &channels, const WmmseConfig &cfg = {});

struct GridSearchResult {
    PowerVector p;
    double objective = 0.0;
};

inline constexpr double kGridSearchLimit = 1e7;

/// Exhaustive search over {0, P/(L-1), ..., P}^M. Throws InstanceTooLarge
/// when levels^M exceeds kGridSearchLimit.
GridSearchResult grid_search_oracle(const ChannelRealization &channels, int levels);

}  // namespace qd2d
