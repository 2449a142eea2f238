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

#include <iosfwd>
#include <memory>
#include <string>

#include "qd2d/graph.h"
#include "qd2d/model.h"

namespace qd2d {

inline constexpr int kCheckpointVersion = 1;

/// A trained model plus the feature normalization it was trained with.
struct Checkpoint {
    std::unique_ptr<PowerModel> model;
    FeatureNormalizer normalizer;
};

/// Versioned JSON container; the payload tag is the model's arch_name().
void save_checkpoint(std::ostream &out, const PowerModel &model, const FeatureNormalizer &norm);
void save_checkpoint(const std::string &path, const PowerModel &model, const FeatureNormalizer &norm);
Checkpoint load_checkpoint(std::istream &in);
Checkpoint load_checkpoint(const std::string &path);

}  // namespace qd2d
