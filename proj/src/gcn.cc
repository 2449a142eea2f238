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

#include "qd2d/gcn.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "qd2d/errors.h"
#include "qd2d/qgnn.h"
#include "qd2d/rng.h"

namespace qd2d {

void GcnArch::validate() const {
    if (F < 1 || H < 1 || Lc < 1) {
        throw ConfigError("gcn needs F, H, L_c >= 1");
    }
}

Dense::Dense(int in_dim, int out_dim)
    : in(in_dim), out(out_dim), W(static_cast<std::size_t>(in_dim) * out_dim, 0.0), b(out_dim, 0.0) {}

namespace {

// Visits every Dense block in flatten() order. P is GcnParams or const GcnParams.
template <typename P, typename Fn>
void for_each_dense(P &p, Fn &&fn) {
    for (auto &layer : p.layers) {
        fn(layer.msg_hidden);
        fn(layer.msg_out);
        fn(layer.upd_hidden);
        fn(layer.upd_out);
    }
    fn(p.head);
}

void affine(const Dense &d, std::span<const double> x, std::span<double> y) {
    for (int o = 0; o < d.out; ++o) {
        double acc = d.b[o];
        const double *row = d.W.data() + static_cast<std::size_t>(o) * d.in;
        for (int i = 0; i < d.in; ++i) {
            acc += row[i] * x[i];
        }
        y[o] = acc;
    }
}

// Accumulates dW, db into grad (laid out like d) and writes dx = W^T dy.
void affine_backward(const Dense &d, std::span<const double> x, std::span<const double> dy, double *grad,
                     std::span<double> dx) {
    double *dW = grad;
    double *db = grad + d.W.size();
    std::fill(dx.begin(), dx.end(), 0.0);
    for (int o = 0; o < d.out; ++o) {
        if (dy[o] == 0.0) {
            continue;
        }
        const double *row = d.W.data() + static_cast<std::size_t>(o) * d.in;
        double *drow = dW + static_cast<std::size_t>(o) * d.in;
        for (int i = 0; i < d.in; ++i) {
            drow[i] += dy[o] * x[i];
            dx[i] += row[i] * dy[o];
        }
        db[o] += dy[o];
    }
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct EdgeCache {
    int u = 0;
    std::vector<double> x, a1, r1, m;
};

struct NodeCache {
    std::vector<EdgeCache> edges;
    std::vector<int> argmax;  // per component: index into edges, -1 if none
    std::vector<double> y, a3, r3;
};

struct LayerCache {
    std::vector<std::vector<double>> h_in;
    std::vector<NodeCache> nodes;
};

struct ForwardTrace {
    std::vector<LayerCache> layers;
    std::vector<std::vector<double>> h_out;
    std::vector<double> logits;
    PowerVector p;
};

ForwardTrace run_forward(const InterferenceGraph &graph, const GcnParams &params) {
    const auto &arch = params.arch;
    if (graph.F != arch.F) {
        throw DimensionMismatch("gcn expects F=" + std::to_string(arch.F) + ", graph has F=" +
                                std::to_string(graph.F));
    }
    const int N = graph.N;
    const int H = arch.H;
    ForwardTrace tr;
    std::vector<std::vector<double>> h(N);
    for (int v = 0; v < N; ++v) {
        const auto f = graph.node(v);
        h[v].assign(f.begin(), f.end());
    }
    for (const auto &layer : params.layers) {
        const int d = layer.msg_hidden.in - 1;
        LayerCache lc;
        lc.h_in = h;
        lc.nodes.resize(N);
        std::vector<std::vector<double>> next(N, std::vector<double>(H));
        for (int v = 0; v < N; ++v) {
            NodeCache &nc = lc.nodes[v];
            std::vector<double> agg(H, 0.0);
            nc.argmax.assign(H, -1);
            for (int u : graph.adjacency[v]) {
                EdgeCache ec;
                ec.u = u;
                ec.x = h[u];
                ec.x.push_back(graph.edge(u, v));
                ec.a1.resize(H);
                affine(layer.msg_hidden, ec.x, ec.a1);
                ec.r1 = ec.a1;
                for (auto &z : ec.r1) {
                    z = std::max(z, 0.0);
                }
                ec.m.resize(H);
                affine(layer.msg_out, ec.r1, ec.m);
                const int e = static_cast<int>(nc.edges.size());
                for (int c = 0; c < H; ++c) {
                    if (nc.argmax[c] < 0 || ec.m[c] > agg[c]) {
                        agg[c] = ec.m[c];
                        nc.argmax[c] = e;
                    }
                }
                nc.edges.push_back(std::move(ec));
            }
            nc.y = h[v];
            nc.y.insert(nc.y.end(), agg.begin(), agg.end());
            if (static_cast<int>(nc.y.size()) != d + H) {
                throw DimensionMismatch("gcn layer input width mismatch");
            }
            nc.a3.resize(H);
            affine(layer.upd_hidden, nc.y, nc.a3);
            nc.r3 = nc.a3;
            for (auto &z : nc.r3) {
                z = std::max(z, 0.0);
            }
            affine(layer.upd_out, nc.r3, next[v]);
        }
        tr.layers.push_back(std::move(lc));
        h = std::move(next);
    }
    tr.p.resize(N);
    tr.logits.resize(N);
    for (int v = 0; v < N; ++v) {
        double z = 0.0;
        affine(params.head, h[v], std::span(&z, 1));
        tr.logits[v] = z;
        tr.p[v] = graph.p_max * sigmoid(std::clamp(z, -kDecodeLogitLimit, kDecodeLogitLimit));
    }
    tr.h_out = std::move(h);
    return tr;
}

}  // namespace

std::size_t gcn_param_count(const GcnArch &arch) {
    const std::size_t H = arch.H;
    std::size_t n = H + 1;  // head
    for (int l = 0; l < arch.Lc; ++l) {
        const std::size_t d = l == 0 ? arch.F : H;
        n += (d + 1) * H + H;  // msg_hidden
        n += H * H + H;        // msg_out
        n += (d + H) * H + H;  // upd_hidden
        n += H * H + H;        // upd_out
    }
    return n;
}

std::size_t GcnParams::size() const {
    std::size_t n = 0;
    for_each_dense(*this, [&](const Dense &d) { n += d.size(); });
    return n;
}

std::vector<double> GcnParams::flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for_each_dense(*this, [&](const Dense &d) {
        flat.insert(flat.end(), d.W.begin(), d.W.end());
        flat.insert(flat.end(), d.b.begin(), d.b.end());
    });
    return flat;
}

void GcnParams::assign(std::span<const double> flat) {
    if (flat.size() != size()) {
        throw DimensionMismatch("gcn parameter vector has wrong length");
    }
    std::size_t i = 0;
    for_each_dense(*this, [&](Dense &d) {
        for (auto &w : d.W) {
            w = flat[i++];
        }
        for (auto &b : d.b) {
            b = flat[i++];
        }
    });
}

GcnParams GcnParams::zeros(const GcnArch &arch) {
    arch.validate();
    GcnParams p;
    p.arch = arch;
    for (int l = 0; l < arch.Lc; ++l) {
        const int d = l == 0 ? arch.F : arch.H;
        p.layers.push_back(GcnLayer{
            .msg_hidden = Dense(d + 1, arch.H),
            .msg_out = Dense(arch.H, arch.H),
            .upd_hidden = Dense(d + arch.H, arch.H),
            .upd_out = Dense(arch.H, arch.H),
        });
    }
    p.head = Dense(arch.H, 1);
    return p;
}

GcnParams GcnParams::random(const GcnArch &arch, std::uint64_t seed, double init_range) {
    GcnParams p = zeros(arch);
    Rng rng(seed);
    std::vector<double> flat(p.size());
    for (auto &x : flat) {
        x = rng.uniform(-init_range, init_range);
    }
    p.assign(flat);
    return p;
}

PowerVector gcn_forward(const InterferenceGraph &graph, const GcnParams &params) {
    return run_forward(graph, params).p;
}

GcnLossAndGrad gcn_gradient(const InterferenceGraph &graph, const GcnParams &params,
                            const ChannelRealization &channels) {
    if (channels.M != graph.N) {
        throw DimensionMismatch("channel realization does not match graph size");
    }
    const int N = graph.N;
    const int H = params.arch.H;
    const ForwardTrace tr = run_forward(graph, params);

    GcnLossAndGrad out;
    out.loss = -sum_rate(channels, tr.p);
    out.grad.assign(params.size(), 0.0);

    // Offsets of each Dense block inside the flat gradient.
    std::vector<std::size_t> offsets;
    {
        std::size_t off = 0;
        for_each_dense(params, [&](const Dense &d) {
            offsets.push_back(off);
            off += d.size();
        });
    }
    const auto block = [&](std::size_t layer, int which) { return out.grad.data() + offsets[layer * 4 + which]; };
    double *head_grad = out.grad.data() + offsets.back();

    const auto dR_dp = sum_rate_gradient(channels, tr.p);
    std::vector<std::vector<double>> dh(N, std::vector<double>(H, 0.0));
    for (int v = 0; v < N; ++v) {
        const double z = tr.logits[v];
        double dz = 0.0;
        if (std::abs(z) < kDecodeLogitLimit) {
            const double s = sigmoid(z);
            dz = -dR_dp[v] * graph.p_max * s * (1.0 - s);
        }
        affine_backward(params.head, tr.h_out[v], std::span(&dz, 1), head_grad, dh[v]);
    }

    for (std::size_t l = params.layers.size(); l-- > 0;) {
        const auto &layer = params.layers[l];
        const auto &lc = tr.layers[l];
        const int d = layer.msg_hidden.in - 1;
        std::vector<std::vector<double>> dprev(N, std::vector<double>(d, 0.0));
        std::vector<double> dr3(H), dy(d + H), dr1(H), dx(d + 1);
        for (int v = 0; v < N; ++v) {
            const NodeCache &nc = lc.nodes[v];
            affine_backward(layer.upd_out, nc.r3, dh[v], block(l, 3), dr3);
            for (int c = 0; c < H; ++c) {
                if (nc.a3[c] <= 0.0) {
                    dr3[c] = 0.0;
                }
            }
            affine_backward(layer.upd_hidden, nc.y, dr3, block(l, 2), dy);
            for (int i = 0; i < d; ++i) {
                dprev[v][i] += dy[i];
            }
            std::vector<std::vector<double>> dm(nc.edges.size(), std::vector<double>(H, 0.0));
            for (int c = 0; c < H; ++c) {
                if (nc.argmax[c] >= 0) {
                    dm[nc.argmax[c]][c] += dy[d + c];
                }
            }
            for (std::size_t e = 0; e < nc.edges.size(); ++e) {
                const EdgeCache &ec = nc.edges[e];
                affine_backward(layer.msg_out, ec.r1, dm[e], block(l, 1), dr1);
                for (int c = 0; c < H; ++c) {
                    if (ec.a1[c] <= 0.0) {
                        dr1[c] = 0.0;
                    }
                }
                affine_backward(layer.msg_hidden, ec.x, dr1, block(l, 0), dx);
                for (int i = 0; i < d; ++i) {
                    dprev[ec.u][i] += dx[i];
                }
            }
        }
        dh = std::move(dprev);
    }
    return out;
}

GcnLossAndGrad gcn_batch_gradient(std::span<const InterferenceGraph> graphs, const GcnParams &params,
                                  std::span<const ChannelRealization> channels) {
    if (graphs.size() != channels.size()) {
        throw DimensionMismatch("graph and channel batches differ in size");
    }
    GcnLossAndGrad total;
    total.grad.assign(params.size(), 0.0);
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        const auto g = gcn_gradient(graphs[i], params, channels[i]);
        total.loss += g.loss;
        for (std::size_t j = 0; j < g.grad.size(); ++j) {
            total.grad[j] += g.grad[j];
        }
    }
    return total;
}

}  // namespace qd2d
