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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qd2d/channel_model.h"
#include "qd2d/gcn.h"
#include "qd2d/graph.h"
#include "qd2d/qgnn.h"

namespace qd2d {

/// Common surface the trainer drives: a flat parameter vector, a forward
/// pass to powers, and the gradient of the unsupervised loss.
class PowerModel {
  public:
    virtual ~PowerModel() = default;

    virtual std::string arch_name() const = 0;
    virtual std::size_t num_params() const = 0;
    virtual std::vector<double> parameters() const = 0;
    virtual void set_parameters(std::span<const double> flat) = 0;

    /// star_seed is ignored by models without stochastic decomposition.
    virtual PowerVector forward(const InterferenceGraph &graph, std::uint64_t star_seed) const = 0;

    /// Returns -sum_rate and writes d(loss)/d(params) into grad (overwritten).
    virtual double loss_and_grad(const InterferenceGraph &graph, const ChannelRealization &channels,
                                 std::uint64_t star_seed, std::span<double> grad) const = 0;
};

class QgnnModel final : public PowerModel {
  public:
    QgnnModel(const QgnnArch &arch, QgnnParams params);
    static QgnnModel random(const QgnnArch &arch, std::uint64_t seed);

    const QgnnArch &arch() const { return arch_; }
    const QgnnParams &params() const { return params_; }

    std::string arch_name() const override { return "qgnn"; }
    std::size_t num_params() const override { return params_.size(); }
    std::vector<double> parameters() const override { return params_.flatten(); }
    void set_parameters(std::span<const double> flat) override { params_.assign(flat); }
    PowerVector forward(const InterferenceGraph &graph, std::uint64_t star_seed) const override;
    double loss_and_grad(const InterferenceGraph &graph, const ChannelRealization &channels,
                         std::uint64_t star_seed, std::span<double> grad) const override;

  private:
    QgnnArch arch_;
    QgnnParams params_;
};

class GcnModel final : public PowerModel {
  public:
    explicit GcnModel(GcnParams params);
    static GcnModel random(const GcnArch &arch, std::uint64_t seed);

    const GcnArch &arch() const { return params_.arch; }
    const GcnParams &params() const { return params_; }

    std::string arch_name() const override { return "gcn"; }
    std::size_t num_params() const override { return params_.size(); }
    std::vector<double> parameters() const override { return params_.flatten(); }
    void set_parameters(std::span<const double> flat) override { params_.assign(flat); }
    PowerVector forward(const InterferenceGraph &graph, std::uint64_t star_seed) const override;
    double loss_and_grad(const InterferenceGraph &graph, const ChannelRealization &channels,
                         std::uint64_t star_seed, std::span<double> grad) const override;

  private:
    GcnParams params_;
};

}  // namespace qd2d
