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

#include "qd2d/qgnn.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

#include "oracles.h"
#include "qd2d/dataset.h"
#include "qd2d/errors.h"

using namespace qd2d;

namespace {

ChannelRealization sample(int M, std::uint64_t seed, double d = 30.0) {
    ScenarioConfig sc;
    sc.M = M;
    sc.d = d;
    return draw_realization(sc, seed, 0);
}

/// Relabels pairs: old pair v becomes pair perm[v].
ChannelRealization permute(const ChannelRealization &ch, const std::vector<int> &perm) {
    ChannelRealization out = ch;
    for (int k = 0; k < ch.M; ++k) {
        out.sigma2[perm[k]] = ch.sigma2[k];
        out.alpha[perm[k]] = ch.alpha[k];
        for (int m = 0; m < ch.M; ++m) {
            out.gain(perm[k], perm[m]) = ch.gain(k, m);
        }
    }
    return out;
}

std::vector<StarSubgraph> permute_stars(const InterferenceGraph &permuted, const std::vector<StarSubgraph> &stars,
                                        const std::vector<int> &perm, Rng &rng) {
    std::vector<StarSubgraph> out(stars.size());
    for (const auto &s : stars) {
        StarSubgraph t;
        t.center = perm[s.center];
        for (int leaf : s.leaves) {
            t.leaves.push_back(perm[leaf]);
        }
        // Leaf order is shuffled as well; the layer must not care.
        for (std::size_t i = t.leaves.size(); i > 1; --i) {
            std::swap(t.leaves[i - 1], t.leaves[rng.below(i)]);
        }
        for (int leaf : t.leaves) {
            t.edge_feats.push_back(permuted.edge(leaf, t.center));
        }
        out[t.center] = std::move(t);
    }
    return out;
}

std::vector<double> random_embedding(Rng &rng, int F) {
    std::vector<double> h(F);
    for (auto &x : h) x = rng.uniform(-1, 1);
    return h;
}

}  // namespace

TEST(QgclCircuit, slot_layout) {
    const auto spec = build_qgcl_circuit(2, 1);
    EXPECT_EQ(spec.n_qubits(), 5);
    EXPECT_EQ(spec.slots_with_role(SlotRole::Input).size(), 5u);
    EXPECT_EQ(spec.slots_with_role(SlotRole::Trainable).size(), 10u);
    EXPECT_EQ(build_qgcl_circuit(1, 1).n_qubits(), 3);
    EXPECT_EQ(build_qgcl_circuit(3, 4).n_qubits(), 7);
    const auto deep = build_qgcl_circuit(2, 3);
    EXPECT_EQ(deep.slots_with_role(SlotRole::Trainable).size(), static_cast<std::size_t>(slots_per_layer(2, 3)));
    EXPECT_EQ(slots_per_layer(2, 3), 30);
    EXPECT_THROW(build_qgcl_circuit(10, 1), CircuitError);
    EXPECT_THROW(build_qgcl_circuit(0, 1), CircuitError);
}

TEST(QgclMessage, identity_circuit_gives_plus_one) {
    const auto spec = build_qgcl_circuit(2, 1);
    const QgclLayerParams zero{std::vector<double>(10, 0.0)};
    const auto msg = qgcl_message({-1.0, -1.0}, {-1.0, -1.0}, 0.0, zero, spec);
    EXPECT_NEAR(msg[0], 1.0, 1e-15);
    EXPECT_NEAR(msg[1], 1.0, 1e-15);
}

TEST(QgclMessage, matches_dense_reference) {
    Rng rng(8);
    const auto spec = build_qgcl_circuit(2, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto c = random_embedding(rng, 2), l = random_embedding(rng, 2);
        const double edge = rng.uniform(0, std::numbers::pi);
        QgclLayerParams layer{std::vector<double>(10)};
        for (auto &t : layer.theta) t = rng.uniform(-1, 1);
        const auto msg = qgcl_message(c, l, edge, layer, spec);

        std::vector<double> angles{embedding_to_angle(c[0]), embedding_to_angle(c[1]), embedding_to_angle(l[0]),
                                   embedding_to_angle(l[1]), edge};
        angles.insert(angles.end(), layer.theta.begin(), layer.theta.end());
        const auto psi = oracle::reference_state(spec, angles);
        for (int q = 0; q < 2; ++q) {
            double z = 0.0;
            for (std::size_t i = 0; i < psi.size(); ++i) {
                z += ((i >> q) & 1 ? -1.0 : 1.0) * std::norm(psi[i]);
            }
            EXPECT_NEAR(msg[q], z, 1e-12);
            EXPECT_LE(std::abs(msg[q]), 1.0);
        }
    }
}

TEST(QgclForward, leafless_star_is_identity) {
    const auto spec = build_qgcl_circuit(2, 1);
    const std::vector<NodeEmbedding> h{{0.3, -0.7}};
    const QgclLayerParams layer{std::vector<double>(10, 0.4)};
    EXPECT_EQ(qgcl_forward({.center = 0, .leaves = {}, .edge_feats = {}}, h, layer, spec), h[0]);
}

TEST(QgclForward, duplicate_leaf_equals_single_leaf) {
    const auto spec = build_qgcl_circuit(2, 1);
    const std::vector<NodeEmbedding> h{{0.3, -0.7}, {-0.2, 0.9}, {-0.2, 0.9}};
    QgclLayerParams layer{std::vector<double>(10)};
    Rng rng(1);
    for (auto &t : layer.theta) t = rng.uniform(-1, 1);
    const auto one = qgcl_forward({.center = 0, .leaves = {1}, .edge_feats = {0.8}}, h, layer, spec);
    const auto two = qgcl_forward({.center = 0, .leaves = {1, 2}, .edge_feats = {0.8, 0.8}}, h, layer, spec);
    for (int q = 0; q < 2; ++q) {
        EXPECT_NEAR(one[q], two[q], 1e-15);
    }
}

TEST(QgclForward, leaf_order_invariance_is_exact) {
    const auto spec = build_qgcl_circuit(2, 2);
    Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<NodeEmbedding> h;
        for (int v = 0; v < 6; ++v) h.push_back(random_embedding(rng, 2));
        QgclLayerParams layer{std::vector<double>(20)};
        for (auto &t : layer.theta) t = rng.uniform(-1, 1);
        StarSubgraph star{.center = 0, .leaves = {1, 2, 3, 4, 5}, .edge_feats = {}};
        for (int i = 0; i < 5; ++i) star.edge_feats.push_back(rng.uniform(0, 3));
        const auto base = qgcl_forward(star, h, layer, spec);
        for (int p = 0; p < 5; ++p) {
            StarSubgraph shuffled = star;
            std::vector<std::size_t> order{0, 1, 2, 3, 4};
            for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
            for (std::size_t i = 0; i < 5; ++i) {
                shuffled.leaves[i] = star.leaves[order[i]];
                shuffled.edge_feats[i] = star.edge_feats[order[i]];
            }
            EXPECT_EQ(qgcl_forward(shuffled, h, layer, spec), base);
        }
    }
}

TEST(QgnnParams, count_is_independent_of_graph_and_k) {
    for (const QgnnArch arch : {QgnnArch{2, 1, 1, 1}, QgnnArch{2, 2, 2, 2}, QgnnArch{2, 3, 2, 5}}) {
        const auto params = QgnnParams::random(arch, 1);
        EXPECT_EQ(params.size(), static_cast<std::size_t>(arch.L * slots_per_layer(arch.F, arch.depth) + 2));
        for (int N : {1, 4, 9}) {
            const auto g = build_graph(sample(N, 3));
            const auto grad = qgnn_gradient(g, params, arch.k, 0, sample(N, 3)).grad;
            EXPECT_EQ(grad.size(), params.size());
        }
    }
    auto p = QgnnParams::zeros({2, 2, 2, 2});
    std::vector<double> flat(p.size());
    std::iota(flat.begin(), flat.end(), 0.0);
    p.assign(flat);
    EXPECT_EQ(p.flatten(), flat);
    EXPECT_THROW(p.assign(std::vector<double>(3)), DimensionMismatch);
}

TEST(QgnnForward, single_node_uses_only_its_features) {
    const auto ch = sample(1, 5);
    const auto g = build_graph(ch);
    QgnnParams params = QgnnParams::random({2, 1, 1, 2}, 4);
    params.decode_scale = 1.7;
    params.decode_bias = -0.2;
    const auto out = qgnn_forward(g, params, 2, 0);
    const double h0 = angle_to_embedding(g.node(0)[0]);
    EXPECT_EQ(out.p[0], decode_power(h0, 1.7, -0.2, ch.p_max));
    // Circuit parameters are irrelevant without neighbors.
    params.layers[0].theta.assign(params.layers[0].theta.size(), 2.5);
    EXPECT_EQ(qgnn_forward(g, params, 2, 0).p, out.p);
}

TEST(QgnnForward, powers_strictly_inside_box) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto ch = sample(5, seed);
        const auto g = build_graph(ch);
        auto params = QgnnParams::random({2, 2, 1, 2}, seed, 3.0);
        for (double scale : {0.0, 1.0, 1e6, -1e6}) {
            params.decode_scale = scale;
            params.decode_bias = scale;
            const auto out = qgnn_forward(g, params, 2, seed);
            for (double p : out.p) {
                EXPECT_GT(p, 0.0);
                EXPECT_LT(p, ch.p_max);
            }
            for (const auto &h : out.embeddings) {
                for (double x : h) EXPECT_LE(std::abs(x), 1.0 + 1e-12);
            }
        }
    }
}

TEST(QgnnForward, deterministic) {
    const auto g = build_graph(sample(6, 2));
    const auto params = QgnnParams::random({2, 2, 2, 3}, 5);
    const auto a = qgnn_forward(g, params, 3, 77);
    const auto b = qgnn_forward(g, params, 3, 77);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.embeddings, b.embeddings);
}

TEST(QgnnForward, relabeling_permutes_powers) {
    Rng rng(31);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ch = sample(5, seed);
        const std::vector<int> perm{3, 0, 4, 1, 2};
        const auto norm = FeatureNormalizer::fit(std::span(&ch, 1));
        const auto g = build_graph(ch, norm);
        const auto gp = build_graph(permute(ch, perm), norm);
        const auto params = QgnnParams::random({2, 2, 2, 2}, seed + 10, 1.0);
        std::vector<std::vector<StarSubgraph>> stars, stars_p;
        for (int l = 0; l < 2; ++l) {
            stars.push_back(decompose_stars(g, 2, seed * 10 + l));
            stars_p.push_back(permute_stars(gp, stars.back(), perm, rng));
        }
        const auto out = qgnn_forward_stars(g, params, stars);
        const auto out_p = qgnn_forward_stars(gp, params, stars_p);
        for (int v = 0; v < 5; ++v) {
            EXPECT_EQ(out_p.p[perm[v]], out.p[v]);
        }
    }
}

TEST(QgnnGradient, single_node_matches_finite_differences) {
    const auto ch = sample(1, 9);
    const auto g = build_graph(ch);
    auto params = QgnnParams::random({2, 1, 1, 2}, 3, 1.0);
    const auto res = qgnn_gradient(g, params, 2, 0, ch);
    const auto fd = oracle::central_differences(
        [&](std::span<const double> x) {
            auto p = params;
            p.assign(x);
            return -sum_rate(ch, qgnn_forward(g, p, 2, 0).p);
        },
        params.flatten(), 1e-6);
    EXPECT_LT(oracle::relative_error(res.grad, fd), 1e-5);
    EXPECT_DOUBLE_EQ(res.loss, -sum_rate(ch, qgnn_forward(g, params, 2, 0).p));
}

TEST(QgnnGradient, zero_decode_scale_blocks_circuit_gradients) {
    const auto ch = sample(4, 2);
    const auto g = build_graph(ch);
    auto params = QgnnParams::random({2, 2, 1, 2}, 3, 1.0);
    params.decode_scale = 0.0;
    const auto res = qgnn_gradient(g, params, 2, 5, ch);
    for (std::size_t i = 0; i + 2 < res.grad.size(); ++i) {
        EXPECT_EQ(res.grad[i], 0.0);
    }
    EXPECT_NE(res.grad.back(), 0.0);
}

TEST(QgnnGradient, four_node_two_layer_matches_finite_differences) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto ch = sample(4, seed, 20.0);
        const auto g = build_graph(ch);
        const QgnnArch arch{2, 2, 2, 2};
        const auto params = QgnnParams::random(arch, seed + 100, 1.0);
        const auto res = qgnn_gradient(g, params, arch.k, seed, ch);
        const auto fd = oracle::central_differences(
            [&](std::span<const double> x) {
                auto p = params;
                p.assign(x);
                return -sum_rate(ch, qgnn_forward(g, p, arch.k, seed).p);
            },
            params.flatten(), 1e-6);
        EXPECT_LT(oracle::relative_error(res.grad, fd), 1e-4) << "seed " << seed;
    }
}

TEST(Pool, sum_and_mean) {
    const std::vector<NodeEmbedding> one{{0.2, -0.4}};
    EXPECT_EQ(pool(one, PoolMode::Sum), one[0]);
    EXPECT_EQ(pool(one, PoolMode::Mean), one[0]);
    const std::vector<NodeEmbedding> opposite{{0.3, -0.9}, {-0.3, 0.9}};
    EXPECT_EQ(pool(opposite, PoolMode::Mean), (std::vector<double>{0.0, 0.0}));
    const std::vector<NodeEmbedding> three{{0.5, 0.25}, {-0.125, 1.0}, {0.75, -0.5}};
    EXPECT_EQ(pool(three, PoolMode::Sum), (std::vector<double>{1.125, 0.75}));
    EXPECT_THROW(pool(std::vector<NodeEmbedding>{}, PoolMode::Sum), std::invalid_argument);
}
