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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qd2d {

using cplx = std::complex<double>;

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point &) const = default;
};

double distance(const Point &a, const Point &b);

/// Placement of M transmitter/receiver pairs inside a d x d square.
struct Scenario {
    int M = 0;
    double d = 0.0;
    double d_min = 0.0;
    double d_max = 0.0;
    std::uint64_t seed = 0;
    std::vector<Point> tx_pos;
    std::vector<Point> rx_pos;

    bool operator==(const Scenario &) const = default;
};

/// One draw of the interference channel.
///
/// G is stored row-major: gain(k, m) is the amplitude from transmitter k to
/// receiver m.
struct ChannelRealization {
    int M = 0;
    std::vector<cplx> G;
    std::vector<double> sigma2;
    std::vector<double> alpha;
    double p_max = 1.0;

    cplx gain(int k, int m) const { return G[static_cast<std::size_t>(k) * M + m]; }
    cplx &gain(int k, int m) { return G[static_cast<std::size_t>(k) * M + m]; }
    double gain2(int k, int m) const { return std::norm(gain(k, m)); }

    /// Throws std::invalid_argument when any invariant is broken.
    void validate() const;

    bool operator==(const ChannelRealization &) const = default;
};

/// Per-pair transmit variable p_m in [0, p_max]. It enters the SINR as
/// |g p|^2, i.e. it scales the transmitted amplitude.
using PowerVector = std::vector<double>;

Scenario generate_scenario(int M, double d, double d_min, double d_max, std::uint64_t seed);

struct FadingOptions {
    double pathloss_exponent = 3.0;
    bool rayleigh = true;
};

/// Large-scale gain (1 + r)^(-eta).
double pathloss(double r, double eta);

ChannelRealization realize_channels(const Scenario &scenario, const FadingOptions &fading,
                                    double sigma2, std::span<const double> alpha, double p_max,
                                    std::uint64_t seed);

/// gamma_m = |g_mm p_m|^2 / (sum_{k != m} |g_km p_k|^2 + sigma_m^2)
std::vector<double> sinr(const ChannelRealization &channels, std::span<const double> p);

/// sum_m alpha_m log2(1 + gamma_m), in bps/Hz.
double weighted_sum_rate(std::span<const double> gamma, std::span<const double> alpha);

/// weighted_sum_rate(sinr(channels, p), channels.alpha)
double sum_rate(const ChannelRealization &channels, std::span<const double> p);

/// d(sum_rate)/dp, closed form.
std::vector<double> sum_rate_gradient(const ChannelRealization &channels,
                                      std::span<const double> p);

}  // namespace qd2d
