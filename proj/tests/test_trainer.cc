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

#include <cmath>
#include <limits>

#include "gtest/gtest.h"

#include "qd2d/dataset.h"
#include "qd2d/errors.h"

using namespace qd2d;

namespace {

/// p = p_max * sigmoid(w), one shared scalar; optionally poisons one instance.
class ScalarModel final : public PowerModel {
  public:
    long poison_instance = -1;
    mutable int gradient_calls = 0;

    std::string arch_name() const override { return "scalar"; }
    std::size_t num_params() const override { return 1; }
    std::vector<double> parameters() const override { return {w_}; }
    void set_parameters(std::span<const double> flat) override { w_ = flat[0]; }
    PowerVector forward(const InterferenceGraph &g, std::uint64_t) const override {
        return PowerVector(g.N, g.p_max / (1.0 + std::exp(-w_)));
    }
    double loss_and_grad(const InterferenceGraph &g, const ChannelRealization &ch, std::uint64_t,
                         std::span<double> grad) const override {
        ++gradient_calls;
        if (poison_instance >= 0 && ch.G[0] == poison_) {
            grad[0] = 0.0;
            return std::numeric_limits<double>::quiet_NaN();
        }
        const auto p = forward(g, 0);
        const auto dR = sum_rate_gradient(ch, p);
        const double s = p[0] / g.p_max;
        double acc = 0.0;
        for (double d : dR) acc += d;
        grad[0] = -acc * g.p_max * s * (1 - s);
        return -sum_rate(ch, p);
    }
    void poison(const ChannelRealization &ch, long idx) {
        poison_ = ch.G[0];
        poison_instance = idx;
    }

  private:
    double w_ = 0.0;
    cplx poison_;
};

Dataset small_dataset(int train, int test) {
    ScenarioConfig sc;
    return generate_dataset(sc, train, test, 5);
}

}  // namespace

TEST(Loss, examples) {
    ChannelRealization one{.M = 1, .G = {1.0}, .sigma2 = {1.0}, .alpha = {1.0}, .p_max = 1.0};
    EXPECT_EQ(unsupervised_loss(std::vector<double>{0.0}, one), 0.0);
    EXPECT_DOUBLE_EQ(unsupervised_loss(std::vector<double>{1.0}, one), -1.0);
    const auto ds = small_dataset(5, 0);
    for (const auto &ch : ds.train) {
        const std::vector<double> p{0.1, 0.4, 0.7, 1.0};
        EXPECT_NEAR(unsupervised_loss(p, ch), -weighted_sum_rate(sinr(ch, p), ch.alpha), 1e-15);
    }
}

TEST(Adam, zero_gradient_keeps_params_and_decays_moments) {
    const std::vector<double> params{0.5, -1.0};
    AdamState state{{0.2, -0.4}, {0.01, 0.02}, 3};
    const auto out = adam_step(params, std::vector<double>{0.0, 0.0}, state, {});
    EXPECT_NEAR(out.state.m[0], 0.9 * 0.2, 1e-15);
    EXPECT_NEAR(out.state.v[1], 0.999 * 0.02, 1e-15);
    EXPECT_EQ(out.state.t, 4);
    const auto fresh = adam_step(params, std::vector<double>{0.0, 0.0}, AdamState::zeros(2), {});
    EXPECT_EQ(fresh.params, params);
}

TEST(Adam, first_step_moves_by_lr) {
    const std::vector<double> params{1.0, 1.0, 1.0};
    const std::vector<double> grad{3.0, -0.02, 250.0};
    const auto out = adam_step(params, grad, AdamState::zeros(3), {.lr = 5e-2});
    EXPECT_NEAR(out.params[0], 1.0 - 5e-2, 1e-8);
    EXPECT_NEAR(out.params[1], 1.0 + 5e-2, 1e-6);
    EXPECT_NEAR(out.params[2], 1.0 - 5e-2, 1e-8);
}

TEST(Adam, pure_and_checked) {
    const std::vector<double> params{0.3}, grad{-0.7};
    const AdamState state{{0.1}, {0.2}, 5};
    const auto a = adam_step(params, grad, state, {});
    const auto b = adam_step(params, grad, state, {});
    EXPECT_EQ(a.params, b.params);
    EXPECT_EQ(a.state.m, b.state.m);
    EXPECT_EQ(a.state.v, b.state.v);
    EXPECT_THROW(adam_step(params, std::vector<double>{1.0, 2.0}, state, {}), DimensionMismatch);
}

TEST(Train, zero_epochs_reports_baseline_only) {
    const auto ds = small_dataset(10, 5);
    auto model = QgnnModel::random({}, 1);
    TrainConfig cfg;
    cfg.epochs = 0;
    const auto report = train(model, FeatureNormalizer::fit(ds.train), ds.train, ds.test, cfg);
    EXPECT_TRUE(report.train_mean.empty());
    EXPECT_TRUE(report.test_mean.empty());
    EXPECT_DOUBLE_EQ(report.wmmse_test_mean, wmmse_mean(ds.test, cfg.wmmse));
    EXPECT_GT(report.wmmse_test_mean, 0.0);
}

TEST(Train, identical_configs_give_identical_reports) {
    const auto ds = small_dataset(12, 6);
    TrainConfig cfg;
    cfg.epochs = 3;
    cfg.batch = 4;
    const auto norm = FeatureNormalizer::fit(ds.train);
    auto a = QgnnModel::random({}, 9);
    auto b = QgnnModel::random({}, 9);
    const auto ra = train(a, norm, ds.train, ds.test, cfg);
    const auto rb = train(b, norm, ds.train, ds.test, cfg);
    EXPECT_EQ(ra.train_mean, rb.train_mean);
    EXPECT_EQ(ra.test_mean, rb.test_mean);
    EXPECT_EQ(ra.final_params, rb.final_params);
    EXPECT_EQ(ra.train_mean.size(), 3u);
}

TEST(Train, baseline_does_not_influence_training) {
    const auto ds = small_dataset(8, 4);
    const auto norm = FeatureNormalizer::fit(ds.train);
    TrainConfig cfg;
    cfg.epochs = 2;
    auto a = GcnModel::random({2, 4, 1}, 3);
    auto b = GcnModel::random({2, 4, 1}, 3);
    const auto ra = train(a, norm, ds.train, ds.test, cfg);
    cfg.wmmse.max_iter = 1;
    const auto rb = train(b, norm, ds.train, ds.test, cfg);
    EXPECT_EQ(ra.final_params, rb.final_params);
    EXPECT_EQ(ra.test_mean, rb.test_mean);
}

TEST(Train, means_are_plain_averages) {
    const auto ds = small_dataset(6, 6);
    const auto norm = FeatureNormalizer::fit(ds.train);
    ScalarModel model;
    model.set_parameters(std::vector<double>{0.7});
    const auto graphs = build_graphs(ds.test, norm);
    double acc = 0.0;
    for (std::size_t i = 0; i < ds.test.size(); ++i) {
        acc += sum_rate(ds.test[i], model.forward(graphs[i], 0));
    }
    EXPECT_NEAR(evaluate_mean(model, graphs, ds.test, {}), acc / 6.0, 1e-15);
}

TEST(Train, scalar_model_improves_and_counts_steps) {
    const auto ds = small_dataset(20, 5);
    ScalarModel model;
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch = 5;
    cfg.threads = 1;
    const auto report = train(model, FeatureNormalizer::fit(ds.train), ds.train, ds.test, cfg);
    EXPECT_EQ(model.gradient_calls, 5 * 20);
    EXPECT_GT(report.test_mean.back(), report.initial_test_mean);
    // More power always helps a shared scalar here, so w climbs every step.
    EXPECT_GT(model.parameters()[0], 10 * cfg.adam.lr);
}

TEST(Train, non_finite_loss_aborts_with_location) {
    const auto ds = small_dataset(6, 2);
    ScalarModel model;
    model.poison(ds.train[4], 4);
    TrainConfig cfg;
    cfg.epochs = 2;
    try {
        train(model, FeatureNormalizer::fit(ds.train), ds.train, ds.test, cfg);
        FAIL() << "expected NonFiniteLoss";
    } catch (const NonFiniteLoss &e) {
        EXPECT_EQ(e.epoch, 1);
        EXPECT_EQ(e.step, 0);
        EXPECT_EQ(e.instance, 4);
    }
}

TEST(Train, config_validation) {
    TrainConfig cfg;
    cfg.adam.lr = 0.0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    cfg.train_size = 0;
    EXPECT_THROW(cfg.validate(), ConfigError);
    cfg = {};
    EXPECT_EQ(cfg.effective_batch(300), 300);
    cfg.batch = 32;
    EXPECT_EQ(cfg.effective_batch(300), 32);
    EXPECT_EQ(cfg.effective_batch(10), 10);
}
