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

#include "qd2d/wmmse.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qd2d/errors.h"
#include "qd2d/rng.h"

namespace qd2d {

void WmmseConfig::validate() const {
    if (max_iter < 1) {
        throw ConfigError("wmmse max_iter must be >= 1");
    }
    if (!(tol > 0.0)) {
        throw ConfigError("wmmse tol must be > 0");
    }
}

namespace {

constexpr double kMseGuard = 1e-12;

}  // namespace

WmmseResult wmmse_allocate(const ChannelRealization &channels, const WmmseConfig &cfg) {
    channels.validate();
    cfg.validate();
    const int M = channels.M;
    const double p_max = channels.p_max;

    std::vector<double> v(M, p_max);
    if (cfg.init == WmmseInit::Random) {
        Rng rng(cfg.seed);
        for (auto &x : v) {
            x = rng.uniform(0.0, p_max);
        }
    }
    std::vector<cplx> u(M);
    std::vector<double> w(M);

    WmmseResult res;
    double objective = sum_rate(channels, v);
    res.trajectory.push_back(objective);
    res.p = v;
    res.objective = objective;

    for (int it = 0; it < cfg.max_iter; ++it) {
        for (int m = 0; m < M; ++m) {
            double rx_power = channels.sigma2[m];
            for (int k = 0; k < M; ++k) {
                rx_power += channels.gain2(k, m) * v[k] * v[k];
            }
            const cplx g_mm = channels.gain(m, m);
            u[m] = g_mm * v[m] / rx_power;
            const double residual = std::abs(1.0 - (std::conj(u[m]) * g_mm * v[m]).real());
            w[m] = 1.0 / std::max(residual, kMseGuard);
        }
        for (int m = 0; m < M; ++m) {
            const cplx g_mm = channels.gain(m, m);
            const double num = channels.alpha[m] * w[m] * (std::conj(u[m]) * g_mm).real();
            double den = 0.0;
            for (int k = 0; k < M; ++k) {
                den += channels.alpha[k] * w[k] * std::norm(u[k]) * channels.gain2(m, k);
            }
            if (den > 0.0) {
                v[m] = std::clamp(num / den, 0.0, p_max);
            }
            // den == 0 means pair m neither helps nor hurts anyone: keep v[m].
        }
        const double next = sum_rate(channels, v);
        res.trajectory.push_back(next);
        res.iterations = it + 1;
        if (next >= res.objective) {
            res.objective = next;
            res.p = v;
        }
        if (std::abs(next - objective) < cfg.tol) {
            res.converged = true;
            break;
        }
        objective = next;
    }
    return res;
}

GridSearchResult grid_search_oracle(const ChannelRealization &channels, int levels) {
    channels.validate();
    if (levels < 2) {
        throw std::invalid_argument("grid search needs at least 2 levels");
    }
    const int M = channels.M;
    if (std::pow(static_cast<double>(levels), M) > kGridSearchLimit) {
        throw InstanceTooLarge("grid search with " + std::to_string(levels) + "^" + std::to_string(M) +
                               " points exceeds the limit");
    }
    const double step = channels.p_max / (levels - 1);
    std::vector<int> idx(M, 0);
    std::vector<double> p(M, 0.0);
    GridSearchResult best{.p = p, .objective = sum_rate(channels, p)};
    // Odometer over the grid; the all-zero point is already evaluated.
    while (true) {
        int pos = 0;
        while (pos < M && idx[pos] == levels - 1) {
            idx[pos] = 0;
            p[pos] = 0.0;
            ++pos;
        }
        if (pos == M) {
            break;
        }
        ++idx[pos];
        p[pos] = idx[pos] == levels - 1 ? channels.p_max : idx[pos] * step;
        const double value = sum_rate(channels, p);
        if (value > best.objective) {
            best.objective = value;
            best.p = p;
        }
    }
    return best;
}

}  // namespace qd2d
