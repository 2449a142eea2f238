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

#include <stdexcept>
#include <string>

namespace qd2d {

/// d_min > d_max, d_max > d, or non-positive sizes.
struct InvalidGeometry : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Brute-force search refused because the grid is too large.
struct InstanceTooLarge : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Malformed circuit: bad target, missing slot, too many qubits.
struct CircuitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Checkpoint does not match the requested model/config.
struct CheckpointMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Training produced a NaN/inf loss. Carries where it happened.
struct NonFiniteLoss : std::runtime_error {
    NonFiniteLoss(int epoch, int step, long instance, double value)
        : std::runtime_error("non-finite loss " + std::to_string(value) + " at epoch " +
                             std::to_string(epoch) + ", step " + std::to_string(step) +
                             ", instance " + std::to_string(instance)),
          epoch(epoch),
          step(step),
          instance(instance) {}
    int epoch;
    int step;
    long instance;
};

}  // namespace qd2d
