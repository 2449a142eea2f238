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

#include "qd2d/channel_model.h"

#include <cmath>

#include "gtest/gtest.h"

#include "oracles.h"
#include "qd2d/errors.h"

using namespace qd2d;

namespace {

ChannelRealization two_pair(double sigma2) {
    ChannelRealization ch;
    ch.M = 2;
    ch.G = {1.0, 0.5, 0.5, 1.0};
    ch.sigma2 = {sigma2, sigma2};
    ch.alpha = {1.0, 1.0};
    ch.p_max = 1.0;
    return ch;
}

ChannelRealization single(cplx g, double sigma2, double p_max = 1.0) {
    ChannelRealization ch;
    ch.M = 1;
    ch.G = {g};
    ch.sigma2 = {sigma2};
    ch.alpha = {1.0};
    ch.p_max = p_max;
    return ch;
}

}  // namespace

TEST(Scenario, single_pair_respects_distance_bounds) {
    const auto s = generate_scenario(1, 100, 2, 10, 7);
    ASSERT_EQ(s.tx_pos.size(), 1u);
    const double r = distance(s.tx_pos[0], s.rx_pos[0]);
    EXPECT_GE(r, 2.0);
    EXPECT_LE(r, 10.0);
}

TEST(Scenario, deterministic_in_seed) {
    EXPECT_EQ(generate_scenario(6, 100, 2, 10, 11), generate_scenario(6, 100, 2, 10, 11));
    EXPECT_NE(generate_scenario(6, 100, 2, 10, 11), generate_scenario(6, 100, 2, 10, 12));
}

TEST(Scenario, coordinates_inside_square) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto s = generate_scenario(4, 100, 2, 10, seed);
        ASSERT_EQ(s.tx_pos.size(), 4u);
        for (int m = 0; m < 4; ++m) {
            for (const auto &p : {s.tx_pos[m], s.rx_pos[m]}) {
                EXPECT_GE(p.x, 0.0);
                EXPECT_LE(p.x, 100.0);
                EXPECT_GE(p.y, 0.0);
                EXPECT_LE(p.y, 100.0);
            }
            const double r = distance(s.tx_pos[m], s.rx_pos[m]);
            EXPECT_GE(r, 2.0);
            EXPECT_LE(r, 10.0);
        }
    }
}

TEST(Scenario, tight_square_still_places_pairs) {
    const auto s = generate_scenario(3, 10, 9, 10, 3);
    for (int m = 0; m < 3; ++m) {
        EXPECT_GE(distance(s.tx_pos[m], s.rx_pos[m]), 9.0);
    }
}

TEST(Scenario, invalid_geometry) {
    EXPECT_THROW(generate_scenario(2, 100, 10, 2, 0), InvalidGeometry);
    EXPECT_THROW(generate_scenario(2, 5, 2, 10, 0), InvalidGeometry);
    EXPECT_THROW(generate_scenario(0, 100, 2, 10, 0), InvalidGeometry);
    EXPECT_THROW(generate_scenario(2, 100, 0, 10, 0), InvalidGeometry);
}

TEST(Channels, exponent_zero_without_fading_is_unit_gain) {
    const auto s = generate_scenario(5, 100, 2, 10, 1);
    const std::vector<double> alpha(5, 1.0);
    const auto ch = realize_channels(s, {.pathloss_exponent = 0.0, .rayleigh = false}, 0.01, alpha, 1.0, 9);
    for (const auto &g : ch.G) {
        EXPECT_DOUBLE_EQ(std::abs(g), 1.0);
    }
}

TEST(Channels, deterministic_in_seed) {
    const auto s = generate_scenario(4, 100, 2, 10, 1);
    const std::vector<double> alpha(4, 1.0);
    const auto a = realize_channels(s, {}, 0.01, alpha, 1.0, 5);
    const auto b = realize_channels(s, {}, 0.01, alpha, 1.0, 5);
    const auto c = realize_channels(s, {}, 0.01, alpha, 1.0, 6);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST(Channels, fading_has_unit_mean_power) {
    // Monte-Carlo estimate of E|g|^2 at a fixed distance.
    Scenario s{.M = 1, .d = 100, .d_min = 5, .d_max = 5, .seed = 0, .tx_pos = {{10, 10}}, .rx_pos = {{15, 10}}};
    const std::vector<double> alpha{1.0};
    constexpr int draws = 100000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
        acc += realize_channels(s, {.pathloss_exponent = 3.0, .rayleigh = true}, 0.01, alpha, 1.0, i).gain2(0, 0);
    }
    const double expected = pathloss(5.0, 3.0);
    EXPECT_NEAR(acc / draws / expected, 1.0, 0.02);
}

TEST(Channels, precondition_errors) {
    const auto s = generate_scenario(2, 100, 2, 10, 1);
    const std::vector<double> alpha(2, 1.0);
    EXPECT_THROW(realize_channels(s, {.pathloss_exponent = -1.0}, 0.01, alpha, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(realize_channels(s, {}, 0.0, alpha, 1.0, 0), std::invalid_argument);
    EXPECT_THROW(realize_channels(s, {}, 0.01, std::vector<double>(3, 1.0), 1.0, 0), DimensionMismatch);
}

TEST(Sinr, zero_power_gives_zero) {
    const auto gamma = sinr(two_pair(0.1), std::vector<double>{0.0, 0.0});
    EXPECT_EQ(gamma, (std::vector<double>{0.0, 0.0}));
}

TEST(Sinr, single_pair_identity) {
    EXPECT_DOUBLE_EQ(sinr(single(1.0, 1.0), std::vector<double>{1.0})[0], 1.0);
}

TEST(Sinr, two_pair_example) {
    const auto gamma = sinr(two_pair(0.1), std::vector<double>{1.0, 1.0});
    EXPECT_NEAR(gamma[0], 1.0 / 0.35, 1e-12);
    EXPECT_NEAR(gamma[0], 2.857142857142857, 1e-12);
    EXPECT_NEAR(gamma[1], gamma[0], 1e-15);
}

TEST(Sinr, power_enters_inside_the_square) {
    // |g p|^2: halving p quarters the single-pair SINR.
    const auto ch = single(1.0, 1.0);
    EXPECT_DOUBLE_EQ(sinr(ch, std::vector<double>{0.5})[0], 0.25);
}

TEST(Sinr, dimension_mismatch) {
    EXPECT_THROW(sinr(two_pair(0.1), std::vector<double>{1.0}), DimensionMismatch);
}

TEST(WeightedSumRate, examples) {
    EXPECT_DOUBLE_EQ(weighted_sum_rate(std::vector<double>{1.0}, std::vector<double>{1.0}), 1.0);
    EXPECT_DOUBLE_EQ(weighted_sum_rate(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 3.0}), 0.0);
    EXPECT_DOUBLE_EQ(weighted_sum_rate(std::vector<double>{3.0, 1.0}, std::vector<double>{0.5, 2.0}), 3.0);
    EXPECT_THROW(weighted_sum_rate(std::vector<double>{1.0}, std::vector<double>{1.0, 1.0}), DimensionMismatch);
}

TEST(WeightedSumRate, single_pair_strictly_increasing_in_power) {
    const auto ch = single(cplx(0.3, -0.2), 0.05, 2.0);
    double prev = sum_rate(ch, std::vector<double>{1e-6});
    for (int i = 1; i <= 200; ++i) {
        const double p = 2.0 * i / 200.0;
        const double r = sum_rate(ch, std::vector<double>{p});
        EXPECT_GT(r, prev);
        prev = r;
    }
}

TEST(Sinr, scale_covariance) {
    Rng rng(42);
    for (int trial = 0; trial < 20; ++trial) {
        const auto s = generate_scenario(5, 100, 2, 10, trial);
        const std::vector<double> alpha(5, 1.0);
        auto ch = realize_channels(s, {}, 0.01, alpha, 1.0, trial);
        std::vector<double> p(5);
        for (auto &x : p) x = rng.uniform();
        const auto before = sinr(ch, p);
        const double c = rng.uniform(0.1, 10.0);
        for (auto &g : ch.G) g *= c;
        for (auto &s2 : ch.sigma2) s2 *= c * c;
        const auto after = sinr(ch, p);
        for (int m = 0; m < 5; ++m) {
            EXPECT_NEAR(after[m], before[m], 1e-12 * std::abs(before[m]));
        }
    }
}

TEST(Sinr, pure_function) {
    const auto s = generate_scenario(4, 100, 2, 10, 3);
    const auto ch = realize_channels(s, {}, 0.01, std::vector<double>(4, 1.0), 1.0, 3);
    const std::vector<double> p{0.1, 0.5, 0.9, 1.0};
    EXPECT_EQ(sinr(ch, p), sinr(ch, p));
    EXPECT_EQ(sum_rate(ch, p), sum_rate(ch, p));
}

TEST(SumRateGradient, matches_finite_differences) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto s = generate_scenario(4, 30, 2, 10, seed);
        auto ch = realize_channels(s, {}, 0.01, std::vector<double>{1.0, 0.5, 2.0, 1.0}, 1.0, seed);
        Rng rng(seed);
        std::vector<double> p(4);
        for (auto &x : p) x = rng.uniform(0.1, 1.0);
        const auto fd = oracle::central_differences([&](std::span<const double> x) { return sum_rate(ch, x); }, p, 1e-6);
        EXPECT_LT(oracle::relative_error(sum_rate_gradient(ch, p), fd), 1e-7);
    }
}
