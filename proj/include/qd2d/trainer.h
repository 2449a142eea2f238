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
#include "qd2d/model.h"
#include "qd2d/wmmse.h"

namespace qd2d {

/// -weighted_sum_rate(sinr(channels, p), alpha). Needs no labels.
double unsupervised_loss(std::span<const double> p, const ChannelRealization &channels);

struct AdamConfig {
    double lr = 5e-2;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long t = 0;

    static AdamState zeros(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), 0}; }
};

struct AdamStep {
    std::vector<double> params;
    AdamState state;
};

/// One bias-corrected Adam update (descent on grad). Pure.
AdamStep adam_step(std::span<const double> params, std::span<const double> grad, const AdamState &state,
                   const AdamConfig &cfg);

struct TrainSeeds {
    std::uint64_t data = 1;
    std::uint64_t init = 2;
    std::uint64_t stars = 3;
};

struct TrainConfig {
    int epochs = 50;
    int batch = 0;  // 0 = full training set per step
    int train_size = 300;
    int test_size = 100;
    TrainSeeds seeds;
    AdamConfig adam;
    WmmseConfig wmmse;
    unsigned threads = 0;  // 0 = hardware concurrency

    void validate() const;
    int effective_batch(std::size_t n_train) const;
};

struct TrainReport {
    std::vector<double> train_mean;  // per epoch, bps/Hz
    std::vector<double> test_mean;
    std::vector<double> seconds;
    double initial_train_mean = 0.0;
    double initial_test_mean = 0.0;
    double wmmse_test_mean = 0.0;
    std::vector<double> final_params;
};

/// Seed for the frozen star decomposition used on evaluation instance i.
std::uint64_t eval_star_seed(const TrainSeeds &seeds, std::uint64_t instance);
/// Seed for the resampled decomposition used in training step gradients.
std::uint64_t train_star_seed(const TrainSeeds &seeds, int epoch, std::uint64_t instance);

std::vector<InterferenceGraph> build_graphs(std::span<const ChannelRealization> data, const FeatureNormalizer &norm);

/// Mean sum rate of the model over a split, frozen stars.
double evaluate_mean(const PowerModel &model, std::span<const InterferenceGraph> graphs,
                     std::span<const ChannelRealization> channels, const TrainSeeds &seeds, unsigned threads = 0);

double wmmse_mean(std::span<const ChannelRealization> channels, const WmmseConfig &cfg, unsigned threads = 0);

/// Trains `model` in place. Graph features use `norm` (fit it on `train`).
/// WMMSE is computed on the test split for reporting only.
TrainReport train(PowerModel &model, const FeatureNormalizer &norm, std::span<const ChannelRealization> train,
                  std::span<const ChannelRealization> test, const TrainConfig &cfg);

}  // namespace qd2d
