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

namespace qd2d {

/// Maps channel gains to rotation angles in [0, pi].
///
/// Gains are compared on a log10 scale. lo/span are fitted on the training
/// split and frozen with the model, so unseen data may saturate at 0 or pi.
struct FeatureNormalizer {
    double direct_lo = -4.0;
    double direct_span = 4.0;
    double cross_lo = -8.0;
    double cross_span = 8.0;
    double alpha_scale = 1.0;

    static FeatureNormalizer fit(std::span<const ChannelRealization> train);

    double direct_angle(double gain2) const;
    double cross_angle(double gain2) const;
    double alpha_angle(double alpha) const;

    bool operator==(const FeatureNormalizer &) const = default;
};

inline constexpr int kNodeFeatures = 2;

/// Complete interference graph over the D2D pairs.
struct InterferenceGraph {
    int N = 0;
    int F = kNodeFeatures;
    double p_max = 1.0;
    /// N x F, row-major, angles in [0, pi]: {direct gain, weight}.
    std::vector<double> node_features;
    /// N x N, edge(k, m) describes interference of transmitter k at receiver m.
    std::vector<double> edge_features;
    std::vector<std::vector<int>> adjacency;

    std::span<const double> node(int v) const {
        return {node_features.data() + static_cast<std::size_t>(v) * F, static_cast<std::size_t>(F)};
    }
    double edge(int k, int m) const { return edge_features[static_cast<std::size_t>(k) * N + m]; }
    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
    int undirected_edges() const;
};

InterferenceGraph build_graph(const ChannelRealization &channels, const FeatureNormalizer &norm);

/// Uses a normalizer fitted to this realization alone.
InterferenceGraph build_graph(const ChannelRealization &channels);

struct StarSubgraph {
    int center = 0;
    std::vector<int> leaves;
    /// edge_feats[i] = graph.edge(leaves[i], center).
    std::vector<double> edge_feats;
};

/// One star per node; node i is the center of star i with min(k, deg(i))
/// leaves drawn uniformly without replacement from its neighbors.
std::vector<StarSubgraph> decompose_stars(const InterferenceGraph &graph, int k, std::uint64_t seed);

/// Throws std::logic_error if a star breaks its invariants against graph.
void check_star(const InterferenceGraph &graph, const StarSubgraph &star);

}  // namespace qd2d
