// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/experiment.hpp"

#include "ponzi/error.hpp"
#include "ponzi/rng.hpp"
#include "ponzi/synth.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace fs = std::filesystem;

namespace ponzi
{
namespace
{
constexpr std::uint64_t kSplitStream = 7;

std::string_view to_string(ExperimentConfig::DataKind k) noexcept
{
    return k == ExperimentConfig::DataKind::Files ? "files" : "synthetic";
}

void write_text(const fs::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write " + path.string());
    out << text;
}

class RunLog
{
public:
    explicit RunLog(const fs::path& path) : out_(path, std::ios::binary)
    {
        if (!out_)
            throw Error("cannot write " + path.string());
    }

    template <typename... Args>
    void line(fmt::format_string<Args...> f, Args&&... args)
    {
        out_ << fmt::format(f, std::forward<Args>(args)...) << '\n';
        out_.flush();
    }

private:
    std::ofstream out_;
};

std::size_t count_positive(std::span<const AccountData> accounts)
{
    return static_cast<std::size_t>(
        std::count_if(accounts.begin(), accounts.end(), [](const AccountData& a) { return a.label == 1; }));
}

/// Runs `fn`, rethrowing any library error with the stage name in front.
template <typename Fn>
auto stage(std::string_view name, Fn&& fn)
{
    try
    {
        return fn();
    }
    catch (const std::exception& e)
    {
        throw Error(fmt::format("stage {}: {}", name, e.what()));
    }
}
}  // namespace

double f1_score(std::span<const int> predictions, std::span<const int> labels)
{
    if (predictions.size() != labels.size())
        throw ShapeError(fmt::format("f1_score: {} predictions for {} labels", predictions.size(), labels.size()));
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        if (labels[i] != 0 && labels[i] != 1)
            throw DataError(fmt::format("f1_score: label {} at {} is not 0 or 1", labels[i], i));
        if (predictions[i] != 0 && predictions[i] != 1)
            throw DataError(fmt::format("f1_score: prediction {} at {} is not 0 or 1", predictions[i], i));
        if (predictions[i] == 1 && labels[i] == 1)
            ++tp;
        else if (predictions[i] == 1)
            ++fp;
        else if (labels[i] == 1)
            ++fn;
    }
    if (tp == 0)
        return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

DatasetSplit split_dataset(std::size_t dataset_size, const SplitSpec& spec)
{
    const auto total = spec.total();
    if (total == 0)
        throw Error("split: all parts are empty");
    if (dataset_size < total)
        throw DataError(fmt::format("split: dataset has {} accounts, split needs {}", dataset_size, total));

    std::vector<std::size_t> order(dataset_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng(spec.seed, kSplitStream).shuffle(order.begin(), order.end());

    const auto n_train = dataset_size * spec.train / total;
    const auto n_val = dataset_size * spec.val / total;

    DatasetSplit s;
    const auto b = order.begin();
    s.train.assign(b, b + static_cast<std::ptrdiff_t>(n_train));
    s.val.assign(b + static_cast<std::ptrdiff_t>(n_train), b + static_cast<std::ptrdiff_t>(n_train + n_val));
    s.test.assign(b + static_cast<std::ptrdiff_t>(n_train + n_val), order.end());
    return s;
}

std::vector<AccountData> select(std::span<const AccountData> accounts, std::span<const std::size_t> indices)
{
    std::vector<AccountData> out;
    out.reserve(indices.size());
    for (const auto i : indices)
        out.push_back(accounts[i]);
    return out;
}

std::vector<double> ScaleReport::mean() const
{
    std::vector<double> m(scales(), 0.0);
    for (const auto& run : runs)
        for (std::size_t k = 0; k < m.size(); ++k)
            m[k] += run[k];
    for (auto& v : m)
        v /= static_cast<double>(runs.size());
    return m;
}

nlohmann::json to_json(const ScaleReport& r)
{
    return {{"method", r.method}, {"delta", r.delta}, {"repeats", r.runs.size()}, {"runs", r.runs},
        {"mean", r.mean()}};
}

std::vector<double> evaluate_per_scale(const DualChannelModel& model, const AugmentedSplit& test)
{
    if (test.sets.empty())
        throw DataError("evaluate_per_scale: no test sets");
    std::vector<double> f1;
    for (std::size_t k = 0; k < test.sets.size(); ++k)
    {
        const auto& set = test.sets[k];
        if (set.empty())
            throw DataError(fmt::format("evaluate_per_scale: test set of scale {} is empty", k + 1));
        const auto preds = predict(model, set);
        std::vector<int> labels, labels_pred;
        for (std::size_t i = 0; i < set.size(); ++i)
        {
            labels.push_back(set[i].label);
            labels_pred.push_back(preds[i].label);
        }
        f1.push_back(f1_score(labels_pred, labels));
    }
    return f1;
}

ThresholdResult threshold_report(std::span<const double> f1, std::size_t delta, double epsilon)
{
    if (f1.size() < 3)
        throw Error(fmt::format("threshold_report: need at least 3 scales, got {}", f1.size()));
    if (!(epsilon >= 0.0))
        throw Error("threshold_report: epsilon must be non-negative");
    // Absorbs decimal representation error so that a gap equal to epsilon counts as within.
    const double tol = epsilon + 1e-12;
    const auto m = f1.size();
    std::size_t s = m;
    while (s > 1 && std::abs(f1[s - 2] - f1[m - 1]) <= tol)
        --s;
    ThresholdResult r;
    r.scale = s;
    r.transactions = s * delta;
    r.stabilized = s < m;
    return r;
}

MethodSpec method_from_string(std::string_view name)
{
    if (name == "code-only")
        return {std::string(name), Channels::CodeOnly, true};
    if (name == "trans-only")
        return {std::string(name), Channels::TransOnly, true};
    if (name == "dual-no-mlp")
        return {std::string(name), Channels::Dual, false};
    if (name == "dual")
        return {std::string(name), Channels::Dual, true};
    throw Error(fmt::format("unknown method '{}' (expected code-only, trans-only, dual-no-mlp or dual)", name));
}

void to_json(nlohmann::json& j, const ExperimentConfig& c)
{
    j = nlohmann::json{{"data", to_string(c.data)}, {"tx_dir", c.tx_dir.string()},
        {"bytecode_dir", c.bytecode_dir.string()}, {"labels_file", c.labels_file.string()},
        {"min_transactions", c.min_transactions}, {"synth_ponzi", c.synth_ponzi},
        {"synth_normal", c.synth_normal}, {"synth_seed", c.synth_seed}, {"delta", c.teaug.delta},
        {"steps", c.teaug.steps},
        {"split", {{"train", c.split.train}, {"val", c.split.val}, {"test", c.split.test}, {"seed", c.split.seed}}},
        {"model", c.model}, {"methods", c.methods}, {"repeats", c.repeats}, {"epsilon", c.epsilon},
        {"output_dir", c.output_dir.string()}, {"save_checkpoints", c.save_checkpoints}};
}

void from_json(const nlohmann::json& j, ExperimentConfig& c)
{
    // Absent keys keep their defaults.
    const auto get = [&j](const char* key, auto& field) {
        if (j.contains(key))
            j.at(key).get_to(field);
    };
    const auto get_path = [&j](const char* key, fs::path& field) {
        if (j.contains(key))
            field = j.at(key).get<std::string>();
    };
    if (j.contains("data"))
    {
        const auto kind = j.at("data").get<std::string>();
        if (kind == "files")
            c.data = ExperimentConfig::DataKind::Files;
        else if (kind == "synthetic")
            c.data = ExperimentConfig::DataKind::Synthetic;
        else
            throw Error("config: data must be \"files\" or \"synthetic\", got \"" + kind + "\"");
    }
    get_path("tx_dir", c.tx_dir);
    get_path("bytecode_dir", c.bytecode_dir);
    get_path("labels_file", c.labels_file);
    get("min_transactions", c.min_transactions);
    get("synth_ponzi", c.synth_ponzi);
    get("synth_normal", c.synth_normal);
    get("synth_seed", c.synth_seed);
    get("delta", c.teaug.delta);
    get("steps", c.teaug.steps);
    if (j.contains("split"))
    {
        const auto& s = j.at("split");
        c.split.train = s.value("train", c.split.train);
        c.split.val = s.value("val", c.split.val);
        c.split.test = s.value("test", c.split.test);
        c.split.seed = s.value("seed", c.split.seed);
    }
    if (j.contains("model"))
    {
        nlohmann::json merged = c.model;
        merged.update(j.at("model"));
        merged.get_to(c.model);
    }
    get("methods", c.methods);
    get("repeats", c.repeats);
    get("epsilon", c.epsilon);
    get_path("output_dir", c.output_dir);
    get("save_checkpoints", c.save_checkpoints);
}

ExperimentConfig load_experiment_config(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open config " + path.string());
    try
    {
        return nlohmann::json::parse(in).get<ExperimentConfig>();
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(fmt::format("config {}: {}", path.string(), e.what()));
    }
}

Dataset load_experiment_data(const ExperimentConfig& config)
{
    if (config.data == ExperimentConfig::DataKind::Files)
        return load_dataset(config.tx_dir, config.bytecode_dir, config.labels_file, {config.min_transactions});
    SynthOptions o;
    o.n_ponzi = config.synth_ponzi;
    o.n_normal = config.synth_normal;
    o.delta = config.teaug.delta;
    o.steps = config.teaug.steps;
    o.seed = config.synth_seed;
    return synth_generate(o);
}

std::string metrics_csv(std::span<const ScaleReport> reports)
{
    const auto m = reports.empty() ? 0 : reports.front().scales();
    std::string out = "method,run";
    for (std::size_t k = 1; k <= m; ++k)
        out += fmt::format(",f1_scale_{}", k);
    out += '\n';
    const auto row = [&out](std::string_view method, std::string_view run, std::span<const double> values) {
        out += fmt::format("{},{}", method, run);
        for (const auto v : values)
            out += fmt::format(",{:.6f}", v);
        out += '\n';
    };
    for (const auto& r : reports)
    {
        for (std::size_t i = 0; i < r.runs.size(); ++i)
            row(r.method, std::to_string(i), r.runs[i]);
        row(r.method, "mean", r.mean());
    }
    return out;
}

ExperimentResult run_experiment(const ExperimentConfig& config)
{
    std::vector<MethodSpec> methods;
    stage("config", [&] {
        config.model.validate();
        if (config.methods.empty())
            throw Error("no methods configured");
        if (config.repeats == 0)
            throw Error("repeats must be at least 1");
        if (config.teaug.steps < 3)
            throw Error("threshold analysis needs at least 3 scales");
        for (const auto& name : config.methods)
            methods.push_back(method_from_string(name));
        return 0;
    });

    ExperimentResult result;
    result.run_dir = config.output_dir;
    stage("setup", [&] {
        fs::create_directories(config.output_dir);
        if (config.save_checkpoints)
            fs::create_directories(config.output_dir / "checkpoints");
        write_text(config.output_dir / "config.json", nlohmann::json(config).dump(2) + "\n");
        return 0;
    });
    RunLog log(config.output_dir / "run.log");
    log.line("data: {}", to_string(config.data));

    const auto dataset = stage("load", [&] { return load_experiment_data(config); });
    log.line("loaded {} accounts ({} ponzi)", dataset.accounts.size(), dataset.positives());

    const auto split = stage("split", [&] { return split_dataset(dataset.accounts.size(), config.split); });
    const auto train_acc = select(dataset.accounts, split.train);
    const auto val_acc = select(dataset.accounts, split.val);
    const auto test_acc = select(dataset.accounts, split.test);
    for (const auto& [name, part] : {std::pair{"train", &train_acc}, {"val", &val_acc}, {"test", &test_acc}})
        log.line("split {}: {} accounts, {} ponzi, {} normal", name, part->size(), count_positive(*part),
            part->size() - count_positive(*part));
    stage("split", [&] {
        nlohmann::json j;
        const auto addresses = [](const std::vector<AccountData>& accs) {
            std::vector<std::string> a;
            for (const auto& acc : accs)
                a.push_back(acc.address);
            return a;
        };
        j["train"] = addresses(train_acc);
        j["val"] = addresses(val_acc);
        j["test"] = addresses(test_acc);
        write_text(config.output_dir / "split.json", j.dump(2) + "\n");
        return 0;
    });

    const auto* contracts = &dataset.contracts;
    const auto train_aug = stage("augment", [&] { return augment_split(train_acc, config.teaug, SplitMode::Train, contracts); });
    const auto val_aug = stage("augment", [&] { return augment_split(val_acc, config.teaug, SplitMode::Validation, contracts); });
    const auto test_aug = stage("augment", [&] { return augment_split(test_acc, config.teaug, SplitMode::Test, contracts); });
    const auto train_graphs = train_aug.pooled();
    const auto val_graphs = val_aug.pooled();
    log.line("augment: delta {} steps {}; {} train, {} val, {} test graphs", config.teaug.delta,
        config.teaug.steps, train_graphs.size(), val_graphs.size(), test_aug.size());

    std::string history = "method,run,epoch,train_loss,val_loss,val_f1\n";
    for (const auto& method : methods)
    {
        ScaleReport report;
        report.method = method.name;
        report.delta = config.teaug.delta;
        for (std::size_t r = 0; r < config.repeats; ++r)
        {
            auto cfg = config.model;
            cfg.channels = method.channels;
            cfg.use_code_mlp = method.use_code_mlp;
            cfg.seed = config.model.seed + r;
            const auto context = fmt::format("{} run {}", method.name, r);
            auto trained = stage("train " + context, [&] { return train(DualChannelModel(cfg), train_graphs, val_graphs); });
            for (const auto& e : trained.history.epochs)
                history += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", method.name, r, e.epoch, e.train_loss,
                    e.val_loss, e.val_f1);
            auto f1 = stage("evaluate " + context, [&] { return evaluate_per_scale(trained.model, test_aug); });
            log.line("{}: best epoch {} (val F1 {:.4f}); test F1 scale 1 {:.4f}, scale {} {:.4f}", context,
                trained.history.best_epoch, trained.history.best_val_f1, f1.front(), f1.size(), f1.back());
            if (config.save_checkpoints)
                stage("checkpoint " + context, [&] {
                    trained.model.save(config.output_dir / "checkpoints" / fmt::format("{}_run{}.json", method.name, r));
                    return 0;
                });
            report.runs.push_back(std::move(f1));
        }
        result.reports.push_back(std::move(report));
    }

    stage("report", [&] {
        nlohmann::json metrics = nlohmann::json::array();
        nlohmann::json thresholds = nlohmann::json::object();
        for (const auto& report : result.reports)
        {
            const auto mean = report.mean();
            const auto t = threshold_report(mean, report.delta, config.epsilon);
            result.thresholds.push_back(t);
            auto j = to_json(report);
            j["threshold"] = {{"scale", t.scale}, {"transactions", t.transactions}, {"stabilized", t.stabilized}};
            metrics.push_back(j);
            thresholds[report.method] = j["threshold"];
            if (!t.stabilized)
                log.line("warning: {} F1 curve does not stabilize within epsilon {}; reporting the last scale",
                    report.method, config.epsilon);
            log.line("{}: reporting threshold scale {} ({} transactions)", report.method, t.scale, t.transactions);
        }
        thresholds["epsilon"] = config.epsilon;

        std::string curve = "scale,transactions";
        for (const auto& report : result.reports)
            curve += "," + report.method;
        curve += '\n';
        std::vector<std::vector<double>> means;
        for (const auto& report : result.reports)
            means.push_back(report.mean());
        for (std::size_t k = 0; k < config.teaug.steps; ++k)
        {
            curve += fmt::format("{},{}", k + 1, (k + 1) * config.teaug.delta);
            for (const auto& m : means)
                curve += fmt::format(",{:.6f}", m[k]);
            curve += '\n';
        }

        write_text(config.output_dir / "metrics.csv", metrics_csv(result.reports));
        write_text(config.output_dir / "metrics.json", metrics.dump(2) + "\n");
        write_text(config.output_dir / "f1_curve.csv", curve);
        write_text(config.output_dir / "threshold.json", thresholds.dump(2) + "\n");
        write_text(config.output_dir / "history.csv", history);
        return 0;
    });
    log.line("done");
    return result;
}
}  // namespace ponzi
