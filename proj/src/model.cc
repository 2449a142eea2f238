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

#include "qd2d/model.h"

#include <algorithm>

#include "qd2d/errors.h"

namespace qd2d {

QgnnModel::QgnnModel(const QgnnArch &arch, QgnnParams params) : arch_(arch), params_(std::move(params)) {
    arch_.validate();
    if (params_.layers.size() != static_cast<std::size_t>(arch_.L)) {
        throw DimensionMismatch("qgnn params have the wrong number of layers");
    }
    for (const auto &layer : params_.layers) {
        if (layer.theta.size() != static_cast<std::size_t>(slots_per_layer(arch_.F, arch_.depth))) {
            throw DimensionMismatch("qgnn layer has the wrong number of angles");
        }
    }
}

QgnnModel QgnnModel::random(const QgnnArch &arch, std::uint64_t seed) {
    return QgnnModel(arch, QgnnParams::random(arch, seed));
}

PowerVector QgnnModel::forward(const InterferenceGraph &graph, std::uint64_t star_seed) const {
    return qgnn_forward(graph, params_, arch_.k, star_seed).p;
}

double QgnnModel::loss_and_grad(const InterferenceGraph &graph, const ChannelRealization &channels,
                                std::uint64_t star_seed, std::span<double> grad) const {
    auto r = qgnn_gradient(graph, params_, arch_.k, star_seed, channels);
    std::copy(r.grad.begin(), r.grad.end(), grad.begin());
    return r.loss;
}

GcnModel::GcnModel(GcnParams params) : params_(std::move(params)) {
    params_.arch.validate();
    if (params_.size() != gcn_param_count(params_.arch)) {
        throw DimensionMismatch("gcn params do not match their architecture");
    }
}

GcnModel GcnModel::random(const GcnArch &arch, std::uint64_t seed) { return GcnModel(GcnParams::random(arch, seed)); }

PowerVector GcnModel::forward(const InterferenceGraph &graph, std::uint64_t) const {
    return gcn_forward(graph, params_);
}

double GcnModel::loss_and_grad(const InterferenceGraph &graph, const ChannelRealization &channels, std::uint64_t,
                               std::span<double> grad) const {
    auto r = gcn_gradient(graph, params_, channels);
    std::copy(r.grad.begin(), r.grad.end(), grad.begin());
    return r.loss;
}

}  // namespace qd2d
