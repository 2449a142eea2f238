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

#include "qd2d/cli.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <numeric>
#include <ostream>
#include <vector>

#include <CLI11.hpp>

#include "qd2d/checkpoint.h"
#include "qd2d/errors.h"
#include "qd2d/wmmse.h"

namespace qd2d {

namespace fs = std::filesystem;

namespace {

void ensure_parent(const std::string &path) {
    const auto parent = fs::path(path).parent_path();
    if (!parent.empty()) {
        std::error_code ec;
        fs::create_directories(parent, ec);
        if (ec) {
            throw std::runtime_error("cannot create directory " + parent.string() + ": " + ec.message());
        }
    }
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Dataset load_dataset_for(const ExperimentConfig &cfg) {
    const auto path = cfg.dataset_path();
    if (!fs::exists(path)) {
        throw ConfigError("dataset " + path + " does not exist (run 'gen' first)");
    }
    Dataset ds = read_dataset(path);
    if (ds.train.size() != static_cast<std::size_t>(cfg.train.train_size) ||
        ds.test.size() != static_cast<std::size_t>(cfg.train.test_size)) {
        throw ConfigError("dataset " + path + " has " + std::to_string(ds.train.size()) + "/" +
                          std::to_string(ds.test.size()) + " train/test records, config expects " +
                          std::to_string(cfg.train.train_size) + "/" + std::to_string(cfg.train.test_size));
    }
    if (ds.scenario.M != cfg.scenario.M) {
        throw ConfigError("dataset M=" + std::to_string(ds.scenario.M) + " does not match config scenario.M=" +
                          std::to_string(cfg.scenario.M));
    }
    return ds;
}

std::unique_ptr<PowerModel> fresh_model(const ExperimentConfig &cfg) {
    if (cfg.model.arch == "qgnn") {
        return std::make_unique<QgnnModel>(QgnnModel::random(cfg.model.qgnn, cfg.train.seeds.init));
    }
    return std::make_unique<GcnModel>(GcnModel::random(cfg.model.gcn, cfg.train.seeds.init));
}

void check_matches(const ExperimentConfig &cfg, const PowerModel &model) {
    const auto mismatch = [](const std::string &field, int have, int want) {
        throw CheckpointMismatch("checkpoint " + field + "=" + std::to_string(have) + " does not match config model." +
                                 field + "=" + std::to_string(want));
    };
    if (model.arch_name() != cfg.model.arch) {
        throw CheckpointMismatch("checkpoint arch '" + model.arch_name() + "' does not match config model.arch '" +
                                 cfg.model.arch + "'");
    }
    if (const auto *q = dynamic_cast<const QgnnModel *>(&model)) {
        const auto &want = cfg.model.qgnn;
        if (q->arch().F != want.F) mismatch("F", q->arch().F, want.F);
        if (q->arch().L != want.L) mismatch("L", q->arch().L, want.L);
        if (q->arch().depth != want.depth) mismatch("depth", q->arch().depth, want.depth);
        if (q->arch().k != want.k) mismatch("k", q->arch().k, want.k);
    } else if (const auto *g = dynamic_cast<const GcnModel *>(&model)) {
        const auto &want = cfg.model.gcn;
        if (g->arch().F != want.F) mismatch("F", g->arch().F, want.F);
        if (g->arch().H != want.H) mismatch("H", g->arch().H, want.H);
        if (g->arch().Lc != want.Lc) mismatch("L_c", g->arch().Lc, want.Lc);
    }
}

}  // namespace

GenSummary cmd_gen(const ExperimentConfig &cfg, std::ostream &log) {
    const auto ds = generate_dataset(cfg.scenario, cfg.train.train_size, cfg.train.test_size, cfg.train.seeds.data);
    GenSummary s{.path = cfg.dataset_path(), .train_records = ds.train.size(), .test_records = ds.test.size()};
    ensure_parent(s.path);
    write_dataset(s.path, ds);
    log << "wrote " << s.train_records << " train + " << s.test_records << " test realizations (M=" << cfg.scenario.M
        << ") to " << s.path << '\n';
    return s;
}

void write_report_csv(std::ostream &out, const TrainReport &report, bool record_timing) {
    out << "epoch,train_mean_bpshz,test_mean_bpshz,wmmse_test_mean_bpshz,seconds\n";
    const auto row = [&](std::size_t epoch, double tr, double te, double secs) {
        out << epoch << ',' << fmt_double(tr) << ',' << fmt_double(te) << ',' << fmt_double(report.wmmse_test_mean)
            << ',';
        if (record_timing) {
            out << fmt_double(secs);
        }
        out << '\n';
    };
    row(0, report.initial_train_mean, report.initial_test_mean, 0.0);
    for (std::size_t e = 0; e < report.train_mean.size(); ++e) {
        row(e + 1, report.train_mean[e], report.test_mean[e], report.seconds[e]);
    }
}

TrainReport cmd_train(const ExperimentConfig &cfg, std::ostream &log) {
    const Dataset ds = load_dataset_for(cfg);
    const auto norm = FeatureNormalizer::fit(ds.train);
    auto model = fresh_model(cfg);
    log << "training " << model->arch_name() << " (" << model->num_params() << " parameters) on "
        << ds.train.size() << " realizations for " << cfg.train.epochs << " epochs\n";
    TrainReport report = train(*model, norm, ds.train, ds.test, cfg.train);

    const auto csv_path = cfg.report_path();
    ensure_parent(csv_path);
    {
        std::ofstream csv(csv_path, std::ios::binary | std::ios::trunc);
        if (!csv) {
            throw std::runtime_error("cannot open " + csv_path + " for writing");
        }
        write_report_csv(csv, report, cfg.io.record_timing);
    }
    const auto ckpt_path = cfg.checkpoint_path();
    ensure_parent(ckpt_path);
    save_checkpoint(ckpt_path, *model, norm);

    const double final_test = report.test_mean.empty() ? report.initial_test_mean : report.test_mean.back();
    const double total_secs = std::accumulate(report.seconds.begin(), report.seconds.end(), 0.0);
    log << "final test mean " << fmt_double(final_test) << " bps/Hz, WMMSE " << fmt_double(report.wmmse_test_mean)
        << " bps/Hz, ratio " << (report.wmmse_test_mean > 0 ? final_test / report.wmmse_test_mean : 0.0) << " ("
        << total_secs << " s)\n";
    log << "report: " << csv_path << "\ncheckpoint: " << ckpt_path << '\n';
    return report;
}

EvalSummary cmd_eval(const ExperimentConfig &cfg, const std::string &checkpoint_path,
                     std::optional<int> oracle_levels, std::ostream &log) {
    if (!fs::exists(checkpoint_path)) {
        throw ConfigError("checkpoint " + checkpoint_path + " does not exist");
    }
    const Checkpoint ck = load_checkpoint(checkpoint_path);
    check_matches(cfg, *ck.model);
    const Dataset ds = load_dataset_for(cfg);
    const auto graphs = build_graphs(ds.test, ck.normalizer);

    EvalSummary s;
    s.arch = ck.model->arch_name();
    s.instances = ds.test.size();
    s.model_mean = evaluate_mean(*ck.model, graphs, ds.test, cfg.train.seeds, cfg.train.threads);
    s.wmmse_mean = wmmse_mean(ds.test, cfg.train.wmmse, cfg.train.threads);
    if (oracle_levels) {
        double total = 0.0;
        for (const auto &ch : ds.test) {
            total += grid_search_oracle(ch, *oracle_levels).objective;
        }
        s.oracle_mean = ds.test.empty() ? 0.0 : total / static_cast<double>(ds.test.size());
    }

    log << "instances      " << s.instances << '\n';
    log << s.arch << " mean      " << fmt_double(s.model_mean) << " bps/Hz\n";
    log << "wmmse mean     " << fmt_double(s.wmmse_mean) << " bps/Hz\n";
    if (s.wmmse_mean > 0) {
        log << s.arch << "/wmmse     " << s.model_mean / s.wmmse_mean << '\n';
    }
    if (s.oracle_mean) {
        log << "oracle mean    " << fmt_double(*s.oracle_mean) << " bps/Hz (" << *oracle_levels << " levels)\n";
        if (*s.oracle_mean > 0) {
            log << s.arch << "/oracle    " << s.model_mean / *s.oracle_mean << '\n';
            log << "wmmse/oracle   " << s.wmmse_mean / *s.oracle_mean << '\n';
        }
    }
    return s;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum graph neural network power control for D2D networks"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    const auto add_common = [&](CLI::App *sub) {
        sub->add_option("-c,--config", config_path, "JSON experiment config");
        sub->add_option("-s,--set", overrides, "Override a config field, e.g. train.epochs=10");
    };
    auto *gen = app.add_subcommand("gen", "Generate train/test channel realizations");
    add_common(gen);
    auto *trn = app.add_subcommand("train", "Train the configured model and write CSV + checkpoint");
    add_common(trn);
    auto *ev = app.add_subcommand("eval", "Evaluate a checkpoint against WMMSE on the test split");
    add_common(ev);
    std::string checkpoint;
    bool oracle = false;
    int levels = 33;
    ev->add_option("--checkpoint", checkpoint, "Checkpoint file (default: from config)");
    ev->add_flag("--oracle", oracle, "Also run the exhaustive grid-search oracle");
    ev->add_option("--levels", levels, "Grid levels per pair for --oracle")->check(CLI::Range(2, 1 << 20));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << e.what() << '\n';
        return kExitConfig;
    }

    try {
        const ExperimentConfig cfg = config_path.empty() ? parse_config("", overrides) : load_config(config_path, overrides);
        if (gen->parsed()) {
            cmd_gen(cfg, out);
        } else if (trn->parsed()) {
            cmd_train(cfg, out);
        } else {
            cmd_eval(cfg, checkpoint.empty() ? cfg.checkpoint_path() : checkpoint,
                     oracle ? std::optional<int>(levels) : std::nullopt, out);
        }
    } catch (const ConfigError &e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CheckpointMismatch &e) {
        err << "checkpoint mismatch: " << e.what() << '\n';
        return kExitConfig;
    } catch (const FormatError &e) {
        err << "bad input file: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        err << "invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NonFiniteLoss &e) {
        err << "training aborted: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitOk;
}

}  // namespace qd2d
