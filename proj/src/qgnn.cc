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
#include <stdexcept>
#include <string>

#include "qd2d/errors.h"
#include "qd2d/rng.h"

namespace qd2d {

void QgnnArch::validate() const {
    if (F < 1 || L < 1 || depth < 1 || k < 1) {
        throw ConfigError("qgnn needs F, L, depth, k >= 1");
    }
    if (2 * F + 1 > kMaxQubits) {
        throw ConfigError("qgnn layer circuit with F=" + std::to_string(F) + " exceeds " +
                          std::to_string(kMaxQubits) + " qubits");
    }
}

int slots_per_layer(int F, int depth) { return depth * (2 * F + 1) * 2; }

CircuitSpec build_qgcl_circuit(int F, int depth) {
    if (F < 1 || depth < 1) {
        throw CircuitError("layer circuit needs F >= 1 and depth >= 1");
    }
    const int n = 2 * F + 1;
    if (n > kMaxQubits) {
        throw CircuitError("F=" + std::to_string(F) + " needs " + std::to_string(n) +
                           " qubits, above the simulator limit");
    }
    CircuitSpec spec(n);
    for (int q = 0; q < n; ++q) {
        spec.ry(q, spec.add_slot(SlotRole::Input));
    }
    for (int b = 0; b < depth; ++b) {
        for (int q = 0; q < n; ++q) {
            spec.ry(q, spec.add_slot(SlotRole::Trainable));
            spec.rz(q, spec.add_slot(SlotRole::Trainable));
        }
        for (int q = 0; q < n; ++q) {
            spec.cnot(q, (q + 1) % n);
        }
    }
    return spec;
}

std::size_t QgnnParams::size() const {
    std::size_t n = 2;
    for (const auto &layer : layers) {
        n += layer.theta.size();
    }
    return n;
}

std::vector<double> QgnnParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for (const auto &layer : layers) {
        flat.insert(flat.end(), layer.theta.begin(), layer.theta.end());
    }
    flat.push_back(decode_scale);
    flat.push_back(decode_bias);
    return flat;
}

void QgnnParams::assign(std::span<const double> flat) {
    if (flat.size() != size()) {
        throw DimensionMismatch("qgnn parameter vector has wrong length");
    }
    std::size_t i = 0;
    for (auto &layer : layers) {
        for (auto &t : layer.theta) {
            t = flat[i++];
        }
    }
    decode_scale = flat[i++];
    decode_bias = flat[i];
}

QgnnParams QgnnParams::zeros(const QgnnArch &arch) {
    arch.validate();
    QgnnParams p;
    p.layers.assign(arch.L, QgclLayerParams{std::vector<double>(slots_per_layer(arch.F, arch.depth), 0.0)});
    p.decode_scale = 0.0;
    p.decode_bias = 0.0;
    return p;
}

QgnnParams QgnnParams::random(const QgnnArch &arch, std::uint64_t seed, double init_range) {
    QgnnParams p = zeros(arch);
    Rng rng(seed);
    std::vector<double> flat(p.size());
    for (auto &x : flat) {
        x = rng.uniform(-init_range, init_range);
    }
    p.assign(flat);
    return p;
}

namespace {

std::vector<double> circuit_angles(const NodeEmbedding &center_h, const NodeEmbedding &leaf_h, double edge_angle,
                                   const QgclLayerParams &layer, const CircuitSpec &spec) {
    const std::size_t F = center_h.size();
    if (leaf_h.size() != F || spec.n_qubits() != static_cast<int>(2 * F + 1) ||
        layer.theta.size() + 2 * F + 1 != static_cast<std::size_t>(spec.angle_slots())) {
        throw DimensionMismatch("embedding/layer sizes do not match the layer circuit");
    }
    std::vector<double> angles;
    angles.reserve(spec.angle_slots());
    for (double h : center_h) {
        angles.push_back(embedding_to_angle(h));
    }
    for (double h : leaf_h) {
        angles.push_back(embedding_to_angle(h));
    }
    angles.push_back(edge_angle);
    angles.insert(angles.end(), layer.theta.begin(), layer.theta.end());
    return angles;
}

std::vector<int> center_qubits(std::size_t F) {
    std::vector<int> q(F);
    for (std::size_t i = 0; i < F; ++i) {
        q[i] = static_cast<int>(i);
    }
    return q;
}

}  // namespace

std::vector<double> qgcl_message(const NodeEmbedding &center_h, const NodeEmbedding &leaf_h, double edge_angle,
                                 const QgclLayerParams &layer, const CircuitSpec &spec) {
    const auto angles = circuit_angles(center_h, leaf_h, edge_angle, layer, spec);
    const auto state = run_circuit(spec, angles);
    return z_expectations(state, center_qubits(center_h.size()));
}

NodeEmbedding qgcl_forward(const StarSubgraph &star, std::span<const NodeEmbedding> embeddings,
                           const QgclLayerParams &layer, const CircuitSpec &spec) {
    const NodeEmbedding &center = embeddings[star.center];
    if (star.leaves.empty()) {
        return center;
    }
    std::vector<std::vector<double>> messages;
    messages.reserve(star.leaves.size());
    for (std::size_t i = 0; i < star.leaves.size(); ++i) {
        messages.push_back(qgcl_message(center, embeddings[star.leaves[i]], star.edge_feats[i], layer, spec));
    }
    std::sort(messages.begin(), messages.end());
    NodeEmbedding out(center.size(), 0.0);
    for (const auto &msg : messages) {
        for (std::size_t q = 0; q < out.size(); ++q) {
            out[q] += msg[q];
        }
    }
    for (auto &x : out) {
        x /= static_cast<double>(messages.size());
    }
    return out;
}

std::vector<NodeEmbedding> initial_embeddings(const InterferenceGraph &graph) {
    std::vector<NodeEmbedding> h(graph.N);
    for (int v = 0; v < graph.N; ++v) {
        for (double a : graph.node(v)) {
            h[v].push_back(angle_to_embedding(a));
        }
    }
    return h;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double clamped_logit(double h0, double scale, double bias) {
    return std::clamp(scale * h0 + bias, -kDecodeLogitLimit, kDecodeLogitLimit);
}

void check_params(const InterferenceGraph &graph, const QgnnParams &params, std::size_t layers) {
    if (params.layers.empty()) {
        throw DimensionMismatch("qgnn needs at least one layer");
    }
    if (layers != params.layers.size()) {
        throw DimensionMismatch("star decompositions do not match layer count");
    }
    const auto expected = static_cast<std::size_t>(slots_per_layer(graph.F, 1));
    for (const auto &layer : params.layers) {
        if (layer.theta.empty() || layer.theta.size() % expected != 0 ||
            layer.theta.size() != params.layers.front().theta.size()) {
            throw DimensionMismatch("qgnn layer parameters do not match feature dimension F=" +
                                    std::to_string(graph.F));
        }
    }
}

int depth_of(const InterferenceGraph &graph, const QgnnParams &params) {
    return static_cast<int>(params.layers.front().theta.size()) / slots_per_layer(graph.F, 1);
}

std::vector<std::vector<StarSubgraph>> stars_for_layers(const InterferenceGraph &graph, std::size_t layers, int k,
                                                        std::uint64_t star_seed) {
    std::vector<std::vector<StarSubgraph>> out;
    out.reserve(layers);
    for (std::size_t l = 0; l < layers; ++l) {
        out.push_back(decompose_stars(graph, k, star_seed + l));
    }
    return out;
}

}  // namespace

double decode_power(double h0, double scale, double bias, double p_max) {
    return p_max * sigmoid(clamped_logit(h0, scale, bias));
}

QgnnOutput qgnn_forward_stars(const InterferenceGraph &graph, const QgnnParams &params,
                              std::span<const std::vector<StarSubgraph>> stars_per_layer) {
    check_params(graph, params, stars_per_layer.size());
    const CircuitSpec spec = build_qgcl_circuit(graph.F, depth_of(graph, params));
    std::vector<NodeEmbedding> h = initial_embeddings(graph);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        std::vector<NodeEmbedding> next(graph.N);
        for (const auto &star : stars_per_layer[l]) {
            next[star.center] = qgcl_forward(star, h, params.layers[l], spec);
        }
        h = std::move(next);
    }
    QgnnOutput out;
    out.p.resize(graph.N);
    for (int v = 0; v < graph.N; ++v) {
        out.p[v] = decode_power(h[v][0], params.decode_scale, params.decode_bias, graph.p_max);
    }
    out.embeddings = std::move(h);
    return out;
}

QgnnOutput qgnn_forward(const InterferenceGraph &graph, const QgnnParams &params, int k, std::uint64_t star_seed) {
    const auto stars = stars_for_layers(graph, params.layers.size(), k, star_seed);
    return qgnn_forward_stars(graph, params, stars);
}

LossAndGrad qgnn_gradient_stars(const InterferenceGraph &graph, const QgnnParams &params,
                                std::span<const std::vector<StarSubgraph>> stars_per_layer,
                                const ChannelRealization &channels) {
    check_params(graph, params, stars_per_layer.size());
    if (channels.M != graph.N) {
        throw DimensionMismatch("channel realization does not match graph size");
    }
    const int N = graph.N;
    const auto F = static_cast<std::size_t>(graph.F);
    const std::size_t L = params.layers.size();
    const CircuitSpec spec = build_qgcl_circuit(graph.F, depth_of(graph, params));

    // Forward, keeping every layer's embeddings.
    std::vector<std::vector<NodeEmbedding>> h(L + 1);
    h[0] = initial_embeddings(graph);
    for (std::size_t l = 0; l < L; ++l) {
        h[l + 1].resize(N);
        for (const auto &star : stars_per_layer[l]) {
            h[l + 1][star.center] = qgcl_forward(star, h[l], params.layers[l], spec);
        }
    }
    PowerVector p(N);
    for (int v = 0; v < N; ++v) {
        p[v] = decode_power(h[L][v][0], params.decode_scale, params.decode_bias, graph.p_max);
    }

    LossAndGrad out;
    out.loss = -sum_rate(channels, p);
    out.grad.assign(params.size(), 0.0);
    const std::size_t decode_at = params.size() - 2;

    const auto dR_dp = sum_rate_gradient(channels, p);
    std::vector<NodeEmbedding> adj(N, NodeEmbedding(F, 0.0));
    for (int v = 0; v < N; ++v) {
        const double z = params.decode_scale * h[L][v][0] + params.decode_bias;
        double dlogit = 0.0;
        if (std::abs(z) < kDecodeLogitLimit) {
            const double s = sigmoid(z);
            dlogit = -dR_dp[v] * graph.p_max * s * (1.0 - s);
        }
        out.grad[decode_at] += dlogit * h[L][v][0];
        out.grad[decode_at + 1] += dlogit;
        adj[v][0] = dlogit * params.decode_scale;
    }

    // Slots whose derivative we need: center + leaf inputs and all trainables.
    std::vector<int> slots;
    for (int s = 0; s < spec.angle_slots(); ++s) {
        if (s != static_cast<int>(2 * F)) {
            slots.push_back(s);
        }
    }
    const std::size_t theta_size = params.layers.front().theta.size();
    constexpr double dangle = std::numbers::pi / 2;

    for (std::size_t l = L; l-- > 0;) {
        std::vector<NodeEmbedding> prev(N, NodeEmbedding(F, 0.0));
        const auto &layer = params.layers[l];
        double *theta_grad = out.grad.data() + l * theta_size;
        for (const auto &star : stars_per_layer[l]) {
            const int v = star.center;
            if (star.leaves.empty()) {
                for (std::size_t q = 0; q < F; ++q) {
                    prev[v][q] += adj[v][q];
                }
                continue;
            }
            Observable obs;
            const double inv = 1.0 / static_cast<double>(star.leaves.size());
            for (std::size_t q = 0; q < F; ++q) {
                if (adj[v][q] != 0.0) {
                    obs.add(adj[v][q] * inv, {static_cast<int>(q)});
                }
            }
            if (obs.terms.empty()) {
                continue;
            }
            for (std::size_t i = 0; i < star.leaves.size(); ++i) {
                const int u = star.leaves[i];
                const auto angles = circuit_angles(h[l][v], h[l][u], star.edge_feats[i], layer, spec);
                const auto g = param_shift_grad(spec, angles, obs, slots);
                for (std::size_t q = 0; q < F; ++q) {
                    prev[v][q] += g[q] * dangle;
                    prev[u][q] += g[F + q] * dangle;
                }
                for (std::size_t t = 0; t < theta_size; ++t) {
                    theta_grad[t] += g[2 * F + t];
                }
            }
        }
        adj = std::move(prev);
    }
    return out;
}

LossAndGrad qgnn_gradient(const InterferenceGraph &graph, const QgnnParams &params, int k, std::uint64_t star_seed,
                          const ChannelRealization &channels) {
    const auto stars = stars_for_layers(graph, params.layers.size(), k, star_seed);
    return qgnn_gradient_stars(graph, params, stars, channels);
}

std::vector<double> pool(std::span<const NodeEmbedding> embeddings, PoolMode mode) {
    if (embeddings.empty()) {
        throw std::invalid_argument("cannot pool an empty set of embeddings");
    }
    std::vector<double> out(embeddings.front().size(), 0.0);
    for (const auto &h : embeddings) {
        if (h.size() != out.size()) {
            throw DimensionMismatch("embeddings differ in length");
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += h[i];
        }
    }
    if (mode == PoolMode::Mean) {
        for (auto &x : out) {
            x /= static_cast<double>(embeddings.size());
        }
    }
    return out;
}

}  // namespace qd2d
