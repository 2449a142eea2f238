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

#include "qd2d/dataset.h"

#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "qd2d/errors.h"
#include "qd2d/rng.h"

namespace qd2d {

using nlohmann::json;

std::vector<double> ScenarioConfig::resolved_alpha() const {
    if (alpha.empty()) {
        return std::vector<double>(M, 1.0);
    }
    if (alpha.size() != static_cast<std::size_t>(M)) {
        throw ConfigError("alpha must have M entries");
    }
    return alpha;
}

ChannelRealization draw_realization(const ScenarioConfig &cfg, std::uint64_t seed, std::uint64_t index) {
    const auto scenario = generate_scenario(cfg.M, cfg.d, cfg.d_min, cfg.d_max, mix_seed(seed, 2 * index));
    const auto alpha = cfg.resolved_alpha();
    return realize_channels(scenario, {.pathloss_exponent = cfg.pathloss_exponent, .rayleigh = cfg.rayleigh},
                            cfg.sigma2, alpha, cfg.p_max, mix_seed(seed, 2 * index + 1));
}

Dataset generate_dataset(const ScenarioConfig &cfg, int train_size, int test_size, std::uint64_t seed) {
    if (train_size < 0 || test_size < 0) {
        throw ConfigError("split sizes must be non-negative");
    }
    Dataset ds{.scenario = cfg, .seed = seed, .train = {}, .test = {}};
    for (int i = 0; i < train_size; ++i) {
        ds.train.push_back(draw_realization(cfg, seed, static_cast<std::uint64_t>(i)));
    }
    // Test draws come from a separate stream so train_size does not shift them.
    const std::uint64_t test_seed = mix_seed(seed, 0x7E57);
    for (int i = 0; i < test_size; ++i) {
        ds.test.push_back(draw_realization(cfg, test_seed, static_cast<std::uint64_t>(i)));
    }
    return ds;
}

namespace {

json realization_record(const ChannelRealization &ch, const char *split, std::size_t index) {
    json G = json::array();
    for (int k = 0; k < ch.M; ++k) {
        json row = json::array();
        for (int m = 0; m < ch.M; ++m) {
            row.push_back({ch.gain(k, m).real(), ch.gain(k, m).imag()});
        }
        G.push_back(std::move(row));
    }
    return json{{"split", split}, {"index", index}, {"G", std::move(G)}, {"sigma2", ch.sigma2}};
}

}  // namespace

void write_dataset(std::ostream &out, const Dataset &ds) {
    const auto &sc = ds.scenario;
    json header{
        {"format", "qd2d-dataset"},
        {"version", kDatasetFormatVersion},
        {"generator_version", kGeneratorVersion},
        {"M", sc.M},
        {"d", sc.d},
        {"d_min", sc.d_min},
        {"d_max", sc.d_max},
        {"pathloss_exponent", sc.pathloss_exponent},
        {"rayleigh", sc.rayleigh},
        {"sigma2", sc.sigma2},
        {"alpha", sc.resolved_alpha()},
        {"p_max", sc.p_max},
        {"seed", ds.seed},
        {"train_size", ds.train.size()},
        {"test_size", ds.test.size()},
    };
    out << header.dump() << '\n';
    for (std::size_t i = 0; i < ds.train.size(); ++i) {
        out << realization_record(ds.train[i], "train", i).dump() << '\n';
    }
    for (std::size_t i = 0; i < ds.test.size(); ++i) {
        out << realization_record(ds.test[i], "test", i).dump() << '\n';
    }
}

void write_dataset(const std::string &path, const Dataset &ds) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path + " for writing");
    }
    write_dataset(out, ds);
    if (!out) {
        throw std::runtime_error("failed writing " + path);
    }
}

Dataset read_dataset(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("dataset is empty");
    }
    Dataset ds;
    try {
        const json header = json::parse(line);
        if (header.at("format") != "qd2d-dataset") {
            throw FormatError("not a qd2d dataset");
        }
        if (header.at("version").get<int>() != kDatasetFormatVersion) {
            throw FormatError("unsupported dataset version " + header.at("version").dump());
        }
        auto &sc = ds.scenario;
        sc.M = header.at("M").get<int>();
        sc.d = header.at("d").get<double>();
        sc.d_min = header.at("d_min").get<double>();
        sc.d_max = header.at("d_max").get<double>();
        sc.pathloss_exponent = header.at("pathloss_exponent").get<double>();
        sc.rayleigh = header.at("rayleigh").get<bool>();
        sc.sigma2 = header.at("sigma2").get<double>();
        sc.alpha = header.at("alpha").get<std::vector<double>>();
        sc.p_max = header.at("p_max").get<double>();
        ds.seed = header.at("seed").get<std::uint64_t>();
        const auto train_size = header.at("train_size").get<std::size_t>();
        const auto test_size = header.at("test_size").get<std::size_t>();

        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const json rec = json::parse(line);
            ChannelRealization ch;
            ch.M = sc.M;
            ch.alpha = sc.alpha;
            ch.p_max = sc.p_max;
            ch.sigma2 = rec.at("sigma2").get<std::vector<double>>();
            const auto &G = rec.at("G");
            if (G.size() != static_cast<std::size_t>(sc.M)) {
                throw FormatError("record G has wrong row count");
            }
            ch.G.reserve(static_cast<std::size_t>(sc.M) * sc.M);
            for (const auto &row : G) {
                if (row.size() != static_cast<std::size_t>(sc.M)) {
                    throw FormatError("record G has wrong column count");
                }
                for (const auto &entry : row) {
                    ch.G.emplace_back(entry.at(0).get<double>(), entry.at(1).get<double>());
                }
            }
            ch.validate();
            const auto split = rec.at("split").get<std::string>();
            if (split == "train") {
                ds.train.push_back(std::move(ch));
            } else if (split == "test") {
                ds.test.push_back(std::move(ch));
            } else {
                throw FormatError("unknown split '" + split + "'");
            }
        }
        if (ds.train.size() != train_size || ds.test.size() != test_size) {
            throw FormatError("record counts do not match the header");
        }
    } catch (const json::exception &e) {
        throw FormatError(std::string("malformed dataset: ") + e.what());
    }
    return ds;
}

Dataset read_dataset(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open dataset " + path);
    }
    return read_dataset(in);
}

}  // namespace qd2d
