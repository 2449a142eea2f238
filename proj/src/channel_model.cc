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
#include <numbers>
#include <string>

#include "qd2d/errors.h"
#include "qd2d/rng.h"

namespace qd2d {

double distance(const Point &a, const Point &b) { return std::hypot(a.x - b.x, a.y - b.y); }

void ChannelRealization::validate() const {
    if (M < 1) {
        throw std::invalid_argument("channel realization needs M >= 1");
    }
    const auto m = static_cast<std::size_t>(M);
    if (G.size() != m * m || sigma2.size() != m || alpha.size() != m) {
        throw DimensionMismatch("channel realization arrays do not match M=" + std::to_string(M));
    }
    for (const auto &g : G) {
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) {
            throw std::invalid_argument("channel matrix has a non-finite entry");
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (!(sigma2[i] > 0.0)) {
            throw std::invalid_argument("noise power must be positive");
        }
        if (!(alpha[i] >= 0.0)) {
            throw std::invalid_argument("pair weights must be non-negative");
        }
    }
    if (!(p_max > 0.0)) {
        throw std::invalid_argument("p_max must be positive");
    }
}

Scenario generate_scenario(int M, double d, double d_min, double d_max, std::uint64_t seed) {
    if (M < 1) {
        throw InvalidGeometry("M must be at least 1");
    }
    if (!(d_min > 0.0) || d_min > d_max || d_max > d) {
        throw InvalidGeometry("need 0 < d_min <= d_max <= d (got d_min=" + std::to_string(d_min) +
                              ", d_max=" + std::to_string(d_max) + ", d=" + std::to_string(d) +
                              ")");
    }
    Scenario s{.M = M, .d = d, .d_min = d_min, .d_max = d_max, .seed = seed, .tx_pos = {}, .rx_pos = {}};
    s.tx_pos.reserve(M);
    s.rx_pos.reserve(M);
    Rng rng(mix_seed(seed, 0));
    const auto inside = [d](const Point &p) { return p.x >= 0.0 && p.x <= d && p.y >= 0.0 && p.y <= d; };
    for (int m = 0; m < M; ++m) {
        // Redraw the whole pair until the receiver lands in the square.
        while (true) {
            const Point tx{rng.uniform(0.0, d), rng.uniform(0.0, d)};
            const double r = rng.uniform(d_min, d_max);
            const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
            const Point rx{tx.x + r * std::cos(phi), tx.y + r * std::sin(phi)};
            const double dist = distance(tx, rx);
            if (inside(rx) && dist >= d_min && dist <= d_max) {
                s.tx_pos.push_back(tx);
                s.rx_pos.push_back(rx);
                break;
            }
        }
    }
    return s;
}

double pathloss(double r, double eta) { return std::pow(1.0 + r, -eta); }

ChannelRealization realize_channels(const Scenario &scenario, const FadingOptions &fading,
                                    double sigma2, std::span<const double> alpha, double p_max,
                                    std::uint64_t seed) {
    if (!(fading.pathloss_exponent >= 0.0)) {
        throw std::invalid_argument("pathloss exponent must be >= 0");
    }
    if (!(sigma2 > 0.0)) {
        throw std::invalid_argument("noise power must be positive");
    }
    const int M = scenario.M;
    if (alpha.size() != static_cast<std::size_t>(M)) {
        throw DimensionMismatch("alpha has " + std::to_string(alpha.size()) +
                                " entries for M=" + std::to_string(M));
    }
    ChannelRealization ch;
    ch.M = M;
    ch.G.resize(static_cast<std::size_t>(M) * M);
    ch.sigma2.assign(M, sigma2);
    ch.alpha.assign(alpha.begin(), alpha.end());
    ch.p_max = p_max;

    Rng rng(mix_seed(seed, 1));
    for (int k = 0; k < M; ++k) {
        for (int m = 0; m < M; ++m) {
            const double amp = std::sqrt(
                pathloss(distance(scenario.tx_pos[k], scenario.rx_pos[m]), fading.pathloss_exponent));
            cplx h{1.0, 0.0};
            if (fading.rayleigh) {
                const double re = rng.normal();
                const double im = rng.normal();
                h = cplx{re, im} * std::numbers::sqrt2 * 0.5;
            }
            ch.gain(k, m) = amp * h;
        }
    }
    ch.validate();
    return ch;
}

std::vector<double> sinr(const ChannelRealization &channels, std::span<const double> p) {
    const int M = channels.M;
    if (p.size() != static_cast<std::size_t>(M)) {
        throw DimensionMismatch("power vector has " + std::to_string(p.size()) +
                                " entries for M=" + std::to_string(M));
    }
    std::vector<double> gamma(M);
    for (int m = 0; m < M; ++m) {
        double interference = channels.sigma2[m];
        for (int k = 0; k < M; ++k) {
            if (k != m) {
                interference += std::norm(channels.gain(k, m) * p[k]);
            }
        }
        gamma[m] = std::norm(channels.gain(m, m) * p[m]) / interference;
    }
    return gamma;
}

double weighted_sum_rate(std::span<const double> gamma, std::span<const double> alpha) {
    if (gamma.size() != alpha.size()) {
        throw DimensionMismatch("gamma and alpha lengths differ");
    }
    double total = 0.0;
    for (std::size_t m = 0; m < gamma.size(); ++m) {
        total += alpha[m] * std::log2(1.0 + gamma[m]);
    }
    return total;
}

double sum_rate(const ChannelRealization &channels, std::span<const double> p) {
    return weighted_sum_rate(sinr(channels, p), channels.alpha);
}

std::vector<double> sum_rate_gradient(const ChannelRealization &channels,
                                      std::span<const double> p) {
    const int M = channels.M;
    if (p.size() != static_cast<std::size_t>(M)) {
        throw DimensionMismatch("power vector length does not match M");
    }
    // R = sum_m alpha_m [log2(T_m) - log2(I_m)], T_m = I_m + |g_mm p_m|^2.
    std::vector<double> total(M), interference(M);
    for (int m = 0; m < M; ++m) {
        double acc = channels.sigma2[m];
        for (int k = 0; k < M; ++k) {
            if (k != m) {
                acc += channels.gain2(k, m) * p[k] * p[k];
            }
        }
        interference[m] = acc;
        total[m] = acc + channels.gain2(m, m) * p[m] * p[m];
    }
    std::vector<double> grad(M);
    for (int j = 0; j < M; ++j) {
        double acc = 0.0;
        for (int m = 0; m < M; ++m) {
            const double g2 = channels.gain2(j, m);
            acc += channels.alpha[m] * g2 / total[m];
            if (m != j) {
                acc -= channels.alpha[m] * g2 / interference[m];
            }
        }
        grad[j] = 2.0 * p[j] * acc / std::numbers::ln2;
    }
    return grad;
}

}  // namespace qd2d
