// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/bytecode.hpp"
#include "ponzi/error.hpp"
#include "ponzi/experiment.hpp"
#include "ponzi/graph.hpp"
#include "ponzi/model.hpp"
#include "ponzi/synth.hpp"
#include "ponzi/teaug.hpp"
#include "ponzi/train.hpp"
#include "ponzi/tx_ingest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace ponzi;

namespace
{
struct DataArgs
{
    std::string config;
    std::string tx_dir;
    std::string bytecode_dir;
    std::string labels;
    std::optional<std::size_t> min_tx;
    std::optional<std::size_t> delta;
    std::optional<std::size_t> steps;

    void attach(CLI::App* cmd)
    {
        cmd->add_option("-c,--config", config, "Experiment config (JSON)")->check(CLI::ExistingFile);
        cmd->add_option("--tx-dir", tx_dir, "Directory of <address>.csv transaction files");
        cmd->add_option("--bytecode-dir", bytecode_dir, "Directory of <address>.hex bytecode files");
        cmd->add_option("--labels", labels, "address,label CSV");
        cmd->add_option("--min-tx", min_tx, "Drop accounts with fewer transactions");
        cmd->add_option("--delta", delta, "Transactions added per scale");
        cmd->add_option("--steps", steps, "Number of scales");
    }

    ExperimentConfig resolve() const
    {
        ExperimentConfig c = config.empty() ? ExperimentConfig{} : load_experiment_config(config);
        if (!tx_dir.empty() || !bytecode_dir.empty() || !labels.empty())
        {
            if (tx_dir.empty() || bytecode_dir.empty() || labels.empty())
                throw Error("--tx-dir, --bytecode-dir and --labels go together");
            c.data = ExperimentConfig::DataKind::Files;
            c.tx_dir = tx_dir;
            c.bytecode_dir = bytecode_dir;
            c.labels_file = labels;
        }
        if (min_tx)
            c.min_transactions = *min_tx;
        if (delta)
            c.teaug.delta = *delta;
        if (steps)
            c.teaug.steps = *steps;
        return c;
    }
};

struct Prepared
{
    Dataset dataset;
    AugmentedSplit train, val, test;
};

Prepared prepare(const ExperimentConfig& c)
{
    Prepared p;
    p.dataset = load_experiment_data(c);
    const auto split = split_dataset(p.dataset.accounts.size(), c.split);
    const auto* contracts = &p.dataset.contracts;
    p.train = augment_split(select(p.dataset.accounts, split.train), c.teaug, SplitMode::Train, contracts);
    p.val = augment_split(select(p.dataset.accounts, split.val), c.teaug, SplitMode::Validation, contracts);
    p.test = augment_split(select(p.dataset.accounts, split.test), c.teaug, SplitMode::Test, contracts);
    return p;
}

void print_curve(std::span<const double> f1, std::size_t delta)
{
    fmt::print("scale,transactions,f1\n");
    for (std::size_t k = 0; k < f1.size(); ++k)
        fmt::print("{},{},{:.6f}\n", k + 1, (k + 1) * delta, f1[k]);
}

void print_threshold(const ThresholdResult& t, double epsilon)
{
    if (!t.stabilized)
        fmt::print(stderr, "warning: curve does not stabilize within epsilon {}; reporting the last scale\n", epsilon);
    fmt::print("threshold: scale {} ({} transactions)\n", t.scale, t.transactions);
}
}  // namespace

int main(int argc, char** argv)
{
#if defined(__GLIBC__)
    // Batch-sized temporaries are freed and reallocated every step; keep them
    // on the heap instead of round-tripping through mmap.
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    CLI::App app{"Dual-channel early warning for Ethereum Ponzi schemes"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load a labeled dataset and summarize it");
    DataArgs ingest_args;
    ingest_args.attach(ingest);
    std::string ingest_out;
    ingest->add_option("-o,--output", ingest_out, "Write per-account features as JSON");

    // teaug-stats
    auto* stats = app.add_subcommand("teaug-stats", "Per-scale snapshot statistics");
    DataArgs stats_args;
    stats_args.attach(stats);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic labeled dataset on disk");
    SynthOptions synth_opts;
    std::string synth_out;
    synth->add_option("-o,--output", synth_out, "Output directory")->required();
    synth->add_option("--ponzi", synth_opts.n_ponzi, "Number of Ponzi accounts");
    synth->add_option("--normal", synth_opts.n_normal, "Number of normal accounts");
    synth->add_option("--delta", synth_opts.delta, "Transactions per scale");
    synth->add_option("--steps", synth_opts.steps, "Number of scales");
    synth->add_option("--seed", synth_opts.seed, "Generator seed");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train one model and save a checkpoint");
    DataArgs train_args;
    train_args.attach(train_cmd);
    std::string train_ckpt;
    std::string train_method = "dual";
    train_cmd->add_option("-o,--checkpoint", train_ckpt, "Checkpoint path")->required();
    train_cmd->add_option("-m,--method", train_method, "code-only, trans-only, dual-no-mlp or dual");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Per-scale F1 of a checkpoint on the test split");
    DataArgs eval_args;
    eval_args.attach(eval_cmd);
    std::string eval_ckpt;
    eval_cmd->add_option("--checkpoint", eval_ckpt, "Checkpoint path")->required()->check(CLI::ExistingFile);

    // threshold
    auto* thr = app.add_subcommand("threshold", "Reporting threshold of a per-scale F1 curve");
    std::vector<double> thr_f1;
    std::string thr_metrics;
    std::size_t thr_delta = 10;
    double thr_eps = 0.005;
    thr->add_option("--f1", thr_f1, "F1 per scale, scale 1 first")->delimiter(',');
    thr->add_option("--metrics", thr_metrics, "metrics.json of a run")->check(CLI::ExistingFile);
    thr->add_option("--delta", thr_delta, "Transactions per scale");
    thr->add_option("--epsilon", thr_eps, "Stabilization tolerance");

    // predict
    auto* pred = app.add_subcommand("predict", "Classify one contract");
    std::string pred_ckpt, pred_code, pred_tx, pred_address;
    pred->add_option("--checkpoint", pred_ckpt, "Checkpoint path")->required()->check(CLI::ExistingFile);
    pred->add_option("--bytecode", pred_code, "Hex bytecode file")->required()->check(CLI::ExistingFile);
    pred->add_option("--tx", pred_tx, "Transaction CSV")->required()->check(CLI::ExistingFile);
    pred->add_option("--address", pred_address, "Contract address (default: transaction file stem)");

    // run
    auto* run = app.add_subcommand("run", "Full protocol: split, augment, train, evaluate, threshold");
    DataArgs run_args;
    run_args.attach(run);
    std::string run_out;
    run->add_option("-o,--output", run_out, "Run directory (overrides the config)");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*ingest)
        {
            const auto c = ingest_args.resolve();
            const auto ds = load_experiment_data(c);
            fmt::print("accounts: {} ({} ponzi, {} normal)\n", ds.accounts.size(), ds.positives(),
                ds.accounts.size() - ds.positives());
            if (!ingest_out.empty())
            {
                nlohmann::json j = nlohmann::json::array();
                for (const auto& a : ds.accounts)
                {
                    const auto f = a.histogram.to_features();
                    j.push_back({{"address", a.address}, {"label", a.label}, {"transactions", a.records.size()},
                        {"opcodes", std::vector<double>(f.begin(), f.end())}});
                }
                std::ofstream(ingest_out) << j.dump(1) << '\n';
            }
        }
        else if (*stats)
        {
            const auto c = stats_args.resolve();
            const auto ds = load_experiment_data(c);
            fmt::print("scale,transactions,avg_nodes,avg_edges,ponzi,normal\n");
            for (const auto& s : scale_statistics(ds.accounts, c.teaug, &ds.contracts))
                fmt::print("{},{},{:.2f},{:.2f},{},{}\n", s.scale, s.transactions, s.avg_nodes, s.avg_edges,
                    s.positives, s.negatives);
        }
        else if (*synth)
        {
            const auto ds = synth_generate(synth_opts);
            write_dataset(ds, synth_out);
            fmt::print("wrote {} accounts to {}\n", ds.accounts.size(), synth_out);
        }
        else if (*train_cmd)
        {
            const auto c = train_args.resolve();
            const auto p = prepare(c);
            const auto method = method_from_string(train_method);
            auto cfg = c.model;
            cfg.channels = method.channels;
            cfg.use_code_mlp = method.use_code_mlp;
            const auto result = train(DualChannelModel(cfg), p.train.pooled(), p.val.pooled());
            result.model.save(train_ckpt);
            fmt::print("best epoch {} (validation F1 {:.4f}); saved {}\n", result.history.best_epoch,
                result.history.best_val_f1, train_ckpt);
        }
        else if (*eval_cmd)
        {
            const auto c = eval_args.resolve();
            const auto p = prepare(c);
            const auto model = DualChannelModel::load(eval_ckpt);
            print_curve(evaluate_per_scale(model, p.test), c.teaug.delta);
        }
        else if (*thr)
        {
            if (thr_f1.empty() == thr_metrics.empty())
                throw Error("give exactly one of --f1 or --metrics");
            if (!thr_f1.empty())
                print_threshold(threshold_report(thr_f1, thr_delta, thr_eps), thr_eps);
            else
            {
                std::ifstream in(thr_metrics);
                for (const auto& r : nlohmann::json::parse(in))
                {
                    const auto mean = r.at("mean").get<std::vector<double>>();
                    const auto t = threshold_report(mean, r.at("delta").get<std::size_t>(), thr_eps);
                    fmt::print("{}: ", r.at("method").get<std::string>());
                    print_threshold(t, thr_eps);
                }
            }
        }
        else if (*pred)
        {
            const auto model = DualChannelModel::load(pred_ckpt);
            const auto code = load_bytecode_file(pred_code);
            const auto records = parse_transactions_file(pred_tx);
            const auto address = normalize_address(pred_address.empty() ? fs::path(pred_tx).stem().string() : pred_address);
            const auto g = merge_multi_edges(build_micro_graph(address, records, code_features(code), 0, nullptr));
            const auto p = predict(model, g);
            fmt::print("{}: {} (p_ponzi={:.6f})\n", address, p.label == 1 ? "ponzi" : "normal", p.ponzi_probability);
        }
        else if (*run)
        {
            auto c = run_args.resolve();
            if (!run_out.empty())
                c.output_dir = run_out;
            const auto result = run_experiment(c);
            std::cout << metrics_csv(result.reports);
            for (std::size_t i = 0; i < result.reports.size(); ++i)
            {
                fmt::print("{}: ", result.reports[i].method);
                print_threshold(result.thresholds[i], c.epsilon);
            }
            fmt::print("run directory: {}\n", result.run_dir.string());
        }
    }
    catch (const std::exception& e)
    {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
