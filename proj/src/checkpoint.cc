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

#include "qd2d/checkpoint.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "qd2d/errors.h"

namespace qd2d {

using nlohmann::json;

namespace {

json normalizer_json(const FeatureNormalizer &n) {
    return {{"direct_lo", n.direct_lo},   {"direct_span", n.direct_span}, {"cross_lo", n.cross_lo},
            {"cross_span", n.cross_span}, {"alpha_scale", n.alpha_scale}};
}

FeatureNormalizer normalizer_from(const json &j) {
    return {.direct_lo = j.at("direct_lo").get<double>(),
            .direct_span = j.at("direct_span").get<double>(),
            .cross_lo = j.at("cross_lo").get<double>(),
            .cross_span = j.at("cross_span").get<double>(),
            .alpha_scale = j.at("alpha_scale").get<double>()};
}

}  // namespace

void save_checkpoint(std::ostream &out, const PowerModel &model, const FeatureNormalizer &norm) {
    json doc{{"format", "qd2d-checkpoint"},
             {"version", kCheckpointVersion},
             {"arch", model.arch_name()},
             {"normalizer", normalizer_json(norm)}};
    if (const auto *q = dynamic_cast<const QgnnModel *>(&model)) {
        json layers = json::array();
        for (const auto &layer : q->params().layers) {
            layers.push_back(layer.theta);
        }
        doc["qgnn"] = {{"F", q->arch().F},
                       {"L", q->arch().L},
                       {"depth", q->arch().depth},
                       {"k", q->arch().k},
                       {"layers", std::move(layers)},
                       {"decode_scale", q->params().decode_scale},
                       {"decode_bias", q->params().decode_bias}};
    } else if (const auto *g = dynamic_cast<const GcnModel *>(&model)) {
        doc["gcn"] = {{"F", g->arch().F},
                      {"H", g->arch().H},
                      {"L_c", g->arch().Lc},
                      {"params", g->params().flatten()}};
    } else {
        throw std::invalid_argument("cannot checkpoint model '" + model.arch_name() + "'");
    }
    out << doc.dump(1) << '\n';
}

void save_checkpoint(const std::string &path, const PowerModel &model, const FeatureNormalizer &norm) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    save_checkpoint(out, model, norm);
}

Checkpoint load_checkpoint(std::istream &in) {
    try {
        const json doc = json::parse(in);
        if (doc.at("format") != "qd2d-checkpoint") {
            throw FormatError("not a qd2d checkpoint");
        }
        if (doc.at("version").get<int>() != kCheckpointVersion) {
            throw FormatError("unsupported checkpoint version " + doc.at("version").dump());
        }
        Checkpoint ck;
        ck.normalizer = normalizer_from(doc.at("normalizer"));
        const auto arch = doc.at("arch").get<std::string>();
        if (arch == "qgnn") {
            const auto &j = doc.at("qgnn");
            QgnnArch a{.F = j.at("F").get<int>(),
                       .L = j.at("L").get<int>(),
                       .depth = j.at("depth").get<int>(),
                       .k = j.at("k").get<int>()};
            QgnnParams p;
            for (const auto &layer : j.at("layers")) {
                p.layers.push_back({layer.get<std::vector<double>>()});
            }
            p.decode_scale = j.at("decode_scale").get<double>();
            p.decode_bias = j.at("decode_bias").get<double>();
            ck.model = std::make_unique<QgnnModel>(a, std::move(p));
        } else if (arch == "gcn") {
            const auto &j = doc.at("gcn");
            GcnArch a{.F = j.at("F").get<int>(), .H = j.at("H").get<int>(), .Lc = j.at("L_c").get<int>()};
            auto p = GcnParams::zeros(a);
            p.assign(j.at("params").get<std::vector<double>>());
            ck.model = std::make_unique<GcnModel>(std::move(p));
        } else {
            throw FormatError("unknown checkpoint arch '" + arch + "'");
        }
        return ck;
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed checkpoint: ") + e.what());
    } catch (const DimensionMismatch &e) {
        throw FormatError(std::string("inconsistent checkpoint: ") + e.what());
    }
}

Checkpoint load_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open checkpoint " + path);
    }
    return load_checkpoint(in);
}

}  // namespace qd2d
