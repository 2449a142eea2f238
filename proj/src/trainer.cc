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

#include "qd2d/trainer.h"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "qd2d/errors.h"
#include "qd2d/parallel.h"
#include "qd2d/rng.h"

namespace qd2d {

double unsupervised_loss(std::span<const double> p, const ChannelRealization &channels) {
    return -sum_rate(channels, p);
}

AdamStep adam_step(std::span<const double> params, std::span<const double> grad, const AdamState &state,
                   const AdamConfig &cfg) {
    const std::size_t n = params.size();
    if (grad.size() != n || state.m.size() != n || state.v.size() != n) {
        throw DimensionMismatch("adam: params, grad and moments must have equal length");
    }
    AdamStep out{std::vector<double>(params.begin(), params.end()), state};
    out.state.t = state.t + 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(out.state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(out.state.t));
    for (std::size_t i = 0; i < n; ++i) {
        double &m = out.state.m[i];
        double &v = out.state.v[i];
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad[i];
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad[i] * grad[i];
        out.params[i] -= cfg.lr * (m / bc1) / (std::sqrt(v / bc2) + cfg.eps);
    }
    return out;
}

void TrainConfig::validate() const {
    if (epochs < 0) {
        throw ConfigError("epochs must be >= 0");
    }
    if (!(adam.lr > 0.0)) {
        throw ConfigError("learning rate must be > 0");
    }
    if (train_size < 1) {
        throw ConfigError("train_size must be >= 1");
    }
    if (test_size < 0 || batch < 0) {
        throw ConfigError("test_size and batch must be >= 0");
    }
    wmmse.validate();
}

int TrainConfig::effective_batch(std::size_t n_train) const {
    const int n = static_cast<int>(n_train);
    return batch <= 0 || batch > n ? n : batch;
}

std::uint64_t eval_star_seed(const TrainSeeds &seeds, std::uint64_t instance) {
    return mix_seed(mix_seed(seeds.stars, 0xE7A1), instance);
}

std::uint64_t train_star_seed(const TrainSeeds &seeds, int epoch, std::uint64_t instance) {
    return mix_seed(mix_seed(seeds.stars, static_cast<std::uint64_t>(epoch) + 1), instance);
}

std::vector<InterferenceGraph> build_graphs(std::span<const ChannelRealization> data, const FeatureNormalizer &norm) {
    std::vector<InterferenceGraph> graphs;
    graphs.reserve(data.size());
    for (const auto &ch : data) {
        graphs.push_back(build_graph(ch, norm));
    }
    return graphs;
}

double evaluate_mean(const PowerModel &model, std::span<const InterferenceGraph> graphs,
                     std::span<const ChannelRealization> channels, const TrainSeeds &seeds, unsigned threads) {
    if (graphs.size() != channels.size()) {
        throw DimensionMismatch("graph and channel counts differ");
    }
    if (graphs.empty()) {
        return 0.0;
    }
    std::vector<double> rates(graphs.size());
    parallel_for(graphs.size(), threads, [&](std::size_t i) {
        rates[i] = sum_rate(channels[i], model.forward(graphs[i], eval_star_seed(seeds, i)));
    });
    return std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
}

double wmmse_mean(std::span<const ChannelRealization> channels, const WmmseConfig &cfg, unsigned threads) {
    if (channels.empty()) {
        return 0.0;
    }
    std::vector<double> rates(channels.size());
    parallel_for(channels.size(), threads, [&](std::size_t i) { rates[i] = wmmse_allocate(channels[i], cfg).objective; });
    return std::accumulate(rates.begin(), rates.end(), 0.0) / static_cast<double>(rates.size());
}

TrainReport train(PowerModel &model, const FeatureNormalizer &norm, std::span<const ChannelRealization> train,
                  std::span<const ChannelRealization> test, const TrainConfig &cfg) {
    cfg.validate();
    if (train.empty()) {
        throw ConfigError("training set is empty");
    }
    const auto train_graphs = build_graphs(train, norm);
    const auto test_graphs = build_graphs(test, norm);

    TrainReport report;
    report.wmmse_test_mean = wmmse_mean(test, cfg.wmmse, cfg.threads);
    report.initial_train_mean = evaluate_mean(model, train_graphs, train, cfg.seeds, cfg.threads);
    report.initial_test_mean = evaluate_mean(model, test_graphs, test, cfg.seeds, cfg.threads);

    const std::size_t n_params = model.num_params();
    std::vector<double> params = model.parameters();
    AdamState adam = AdamState::zeros(n_params);
    const int batch = cfg.effective_batch(train.size());

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<std::vector<double>> grads(batch, std::vector<double>(n_params));
    std::vector<double> losses(batch);

    int step = 0;
    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        if (batch < static_cast<int>(train.size())) {
            Rng rng(mix_seed(cfg.seeds.data, 0x5EED0000ULL + epoch));
            for (std::size_t i = order.size(); i > 1; --i) {
                std::swap(order[i - 1], order[rng.below(i)]);
            }
        }
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t count = std::min<std::size_t>(batch, order.size() - start);
            parallel_for(count, cfg.threads, [&](std::size_t j) {
                const std::size_t idx = order[start + j];
                losses[j] = model.loss_and_grad(train_graphs[idx], train[idx], train_star_seed(cfg.seeds, epoch, idx),
                                                grads[j]);
            });
            std::vector<double> total(n_params, 0.0);
            for (std::size_t j = 0; j < count; ++j) {
                if (!std::isfinite(losses[j])) {
                    throw NonFiniteLoss(epoch, step, static_cast<long>(order[start + j]), losses[j]);
                }
                for (std::size_t i = 0; i < n_params; ++i) {
                    total[i] += grads[j][i];
                }
            }
            auto next = adam_step(params, total, adam, cfg.adam);
            params = std::move(next.params);
            adam = std::move(next.state);
            model.set_parameters(params);
            ++step;
        }
        report.train_mean.push_back(evaluate_mean(model, train_graphs, train, cfg.seeds, cfg.threads));
        report.test_mean.push_back(evaluate_mean(model, test_graphs, test, cfg.seeds, cfg.threads));
        report.seconds.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    report.final_params = std::move(params);
    return report;
}

}  // namespace qd2d
