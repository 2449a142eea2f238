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
#include "qd2d/qsim.h"

namespace qd2d {

/// Per-node embedding; every entry is a Pauli-Z expectation in [-1, 1].
using NodeEmbedding = std::vector<double>;

struct QgnnArch {
    int F = kNodeFeatures;
    int L = 2;      // message-passing layers
    int depth = 2;  // entangling blocks per layer circuit
    int k = 2;      // leaves per star

    void validate() const;
    bool operator==(const QgnnArch &) const = default;
};

/// Trainable angles per layer circuit: depth blocks of (RY, RZ) on 2F+1 qubits.
int slots_per_layer(int F, int depth);

/// Layer-circuit register layout:
///   qubits [0, F)   center embedding   (RY, input slots [0, F))
///   qubits [F, 2F)  leaf embedding     (RY, input slots [F, 2F))
///   qubit 2F        edge feature       (RY, input slot 2F)
/// followed by `depth` blocks of per-qubit RY/RZ (trainable) and a CNOT ring.
CircuitSpec build_qgcl_circuit(int F, int depth);

struct QgclLayerParams {
    std::vector<double> theta;
};

struct QgnnParams {
    std::vector<QgclLayerParams> layers;
    double decode_scale = 1.0;
    double decode_bias = 0.0;

    std::size_t size() const;
    std::vector<double> flatten() const;
    void assign(std::span<const double> flat);

    /// Shape-only constructor, all zeros.
    static QgnnParams zeros(const QgnnArch &arch);
    /// Every parameter uniform in [-init_range, init_range].
    static QgnnParams random(const QgnnArch &arch, std::uint64_t seed, double init_range = 0.1);
};

/// [-1, 1] -> [0, pi]
inline double embedding_to_angle(double h) { return (h + 1.0) * 1.5707963267948966; }
/// [0, pi] -> [-1, 1], inverse of embedding_to_angle.
inline double angle_to_embedding(double a) { return a / 1.5707963267948966 - 1.0; }

/// One shared-unitary pass over (center, leaf, edge). Returns <Z_q> on the
/// center qubits.
std::vector<double> qgcl_message(const NodeEmbedding &center_h, const NodeEmbedding &leaf_h,
                                 double edge_angle, const QgclLayerParams &layer, const CircuitSpec &spec);

/// Mean of qgcl_message over the star's leaves. Messages are summed in a
/// canonical (sorted) order so the result does not depend on leaf order at
/// all. A leafless star returns the center embedding.
NodeEmbedding qgcl_forward(const StarSubgraph &star, std::span<const NodeEmbedding> embeddings,
                           const QgclLayerParams &layer, const CircuitSpec &spec);

struct QgnnOutput {
    PowerVector p;
    std::vector<NodeEmbedding> embeddings;
};

/// Node features as layer-0 embeddings.
std::vector<NodeEmbedding> initial_embeddings(const InterferenceGraph &graph);

/// Logit clamp; keeps decoded powers strictly inside (0, p_max) in doubles.
inline constexpr double kDecodeLogitLimit = 30.0;

double decode_power(double h0, double scale, double bias, double p_max);

/// Forward pass; layer l decomposes stars with seed star_seed + l.
QgnnOutput qgnn_forward(const InterferenceGraph &graph, const QgnnParams &params, int k, std::uint64_t star_seed);

/// Forward pass over explicitly supplied stars (one decomposition per layer).
QgnnOutput qgnn_forward_stars(const InterferenceGraph &graph, const QgnnParams &params,
                              std::span<const std::vector<StarSubgraph>> stars_per_layer);

struct LossAndGrad {
    double loss = 0.0;
    std::vector<double> grad;  // same layout as QgnnParams::flatten()
};

/// Gradient of -sum_rate(channels, p) with respect to every trainable
/// parameter, by exact chain rule with parameter-shift circuit derivatives.
LossAndGrad qgnn_gradient(const InterferenceGraph &graph, const QgnnParams &params, int k,
                          std::uint64_t star_seed, const ChannelRealization &channels);

LossAndGrad qgnn_gradient_stars(const InterferenceGraph &graph, const QgnnParams &params,
                                std::span<const std::vector<StarSubgraph>> stars_per_layer,
                                const ChannelRealization &channels);

enum class PoolMode { Sum, Mean };

std::vector<double> pool(std::span<const NodeEmbedding> embeddings, PoolMode mode);

}  // namespace qd2d
