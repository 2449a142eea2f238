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
#include <span>
#include <vector>

#include "qd2d/channel_model.h"
#include "qd2d/graph.h"

namespace qd2d {

struct GcnArch {
    int F = kNodeFeatures;
    int H = 16;
    int Lc = 2;

    void validate() const;
    bool operator==(const GcnArch &) const = default;
};

/// Affine map y = W x + b, W stored row-major (out x in).
struct Dense {
    int in = 0;
    int out = 0;
    std::vector<double> W;
    std::vector<double> b;

    Dense() = default;
    Dense(int in_dim, int out_dim);
    std::size_t size() const { return W.size() + b.size(); }
};

/// One message-passing layer: msg = MLP1([h_u, e_uv]), agg = max_u msg,
/// h_v <- MLP2([h_v, agg]). Each MLP is Dense -> ReLU -> Dense.
struct GcnLayer {
    Dense msg_hidden, msg_out;
    Dense upd_hidden, upd_out;
};

struct GcnParams {
    GcnArch arch;
    std::vector<GcnLayer> layers;
    Dense head;  // H -> 1

    std::size_t size() const;
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    static GcnParams zeros(const GcnArch &arch);
    static GcnParams random(const GcnArch &arch, std::uint64_t seed, double init_range = 0.1);
};

/// Parameter count as a function of the architecture alone.
std::size_t gcn_param_count(const GcnArch &arch);

PowerVector gcn_forward(const InterferenceGraph &graph, const GcnParams &params);

struct GcnLossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;  // GcnParams::flatten() layout
};

/// Reverse-mode gradient of -sum_rate(channels, gcn_forward(graph)).
GcnLossAndGrad gcn_gradient(const InterferenceGraph &graph, const GcnParams &params,
                            const ChannelRealization &channels);

/// Summed loss and gradient over a batch of (graph, channels) pairs.
GcnLossAndGrad gcn_batch_gradient(std::span<const InterferenceGraph> graphs, const GcnParams &params,
                                  std::span<const ChannelRealization> channels);

}  // namespace qd2d
