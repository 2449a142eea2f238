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

#include "qd2d/graph.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qd2d/rng.h"

namespace qd2d {

namespace {

double log_angle(double gain2, double lo, double span) {
    if (!(gain2 > 0.0)) {
        return 0.0;
    }
    const double t = (std::log10(gain2) - lo) / span;
    return std::numbers::pi * std::clamp(t, 0.0, 1.0);
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double x) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    bool empty() const { return lo > hi; }
};

}  // namespace

FeatureNormalizer FeatureNormalizer::fit(std::span<const ChannelRealization> train) {
    Range direct, cross;
    double alpha_max = 0.0;
    for (const auto &ch : train) {
        for (int k = 0; k < ch.M; ++k) {
            for (int m = 0; m < ch.M; ++m) {
                const double g2 = ch.gain2(k, m);
                if (g2 > 0.0) {
                    (k == m ? direct : cross).add(std::log10(g2));
                }
            }
            alpha_max = std::max(alpha_max, ch.alpha[k]);
        }
    }
    FeatureNormalizer norm;
    if (!direct.empty()) {
        norm.direct_lo = direct.lo;
        norm.direct_span = direct.hi > direct.lo ? direct.hi - direct.lo : 1.0;
    }
    if (!cross.empty()) {
        norm.cross_lo = cross.lo;
        norm.cross_span = cross.hi > cross.lo ? cross.hi - cross.lo : 1.0;
    }
    if (alpha_max > 0.0) {
        norm.alpha_scale = alpha_max;
    }
    return norm;
}

double FeatureNormalizer::direct_angle(double gain2) const { return log_angle(gain2, direct_lo, direct_span); }

double FeatureNormalizer::cross_angle(double gain2) const { return log_angle(gain2, cross_lo, cross_span); }

double FeatureNormalizer::alpha_angle(double alpha) const {
    return std::numbers::pi * std::clamp(alpha / alpha_scale, 0.0, 1.0);
}

int InterferenceGraph::undirected_edges() const {
    int twice = 0;
    for (const auto &nbrs : adjacency) {
        twice += static_cast<int>(nbrs.size());
    }
    return twice / 2;
}

InterferenceGraph build_graph(const ChannelRealization &channels, const FeatureNormalizer &norm) {
    channels.validate();
    const int N = channels.M;
    InterferenceGraph g;
    g.N = N;
    g.p_max = channels.p_max;
    g.node_features.resize(static_cast<std::size_t>(N) * g.F);
    g.edge_features.assign(static_cast<std::size_t>(N) * N, 0.0);
    g.adjacency.resize(N);
    for (int v = 0; v < N; ++v) {
        g.node_features[static_cast<std::size_t>(v) * g.F + 0] = norm.direct_angle(channels.gain2(v, v));
        g.node_features[static_cast<std::size_t>(v) * g.F + 1] = norm.alpha_angle(channels.alpha[v]);
        for (int u = 0; u < N; ++u) {
            if (u == v) {
                continue;
            }
            g.edge_features[static_cast<std::size_t>(u) * N + v] = norm.cross_angle(channels.gain2(u, v));
            g.adjacency[v].push_back(u);
        }
    }
    return g;
}

InterferenceGraph build_graph(const ChannelRealization &channels) {
    return build_graph(channels, FeatureNormalizer::fit(std::span(&channels, 1)));
}

std::vector<StarSubgraph> decompose_stars(const InterferenceGraph &graph, int k, std::uint64_t seed) {
    if (k < 1) {
        throw std::invalid_argument("star size k must be >= 1");
    }
    std::vector<StarSubgraph> stars;
    stars.reserve(graph.N);
    for (int v = 0; v < graph.N; ++v) {
        std::vector<int> pool = graph.adjacency[v];
        const std::size_t take = std::min<std::size_t>(k, pool.size());
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(v)));
        // Partial Fisher-Yates: the first `take` entries are a uniform sample.
        for (std::size_t i = 0; i < take; ++i) {
            const std::size_t j = i + rng.below(pool.size() - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(take);
        StarSubgraph star{.center = v, .leaves = std::move(pool), .edge_feats = {}};
        for (int leaf : star.leaves) {
            star.edge_feats.push_back(graph.edge(leaf, v));
        }
        stars.push_back(std::move(star));
    }
    return stars;
}

void check_star(const InterferenceGraph &graph, const StarSubgraph &star) {
    if (star.center < 0 || star.center >= graph.N) {
        throw std::logic_error("star center out of range");
    }
    if (star.edge_feats.size() != star.leaves.size()) {
        throw std::logic_error("star edge features do not match leaves");
    }
    const auto &nbrs = graph.adjacency[star.center];
    for (std::size_t i = 0; i < star.leaves.size(); ++i) {
        const int leaf = star.leaves[i];
        if (leaf == star.center) {
            throw std::logic_error("star center listed as its own leaf");
        }
        if (std::find(nbrs.begin(), nbrs.end(), leaf) == nbrs.end()) {
            throw std::logic_error("star leaf " + std::to_string(leaf) + " is not adjacent to center");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (star.leaves[j] == leaf) {
                throw std::logic_error("duplicate star leaf");
            }
        }
    }
}

}  // namespace qd2d
