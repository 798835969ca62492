// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/metrics.hpp"
#include "ponzi/model.hpp"
#include "ponzi/teaug.hpp"
#include "ponzi/train.hpp"
#include "ponzi/tx_ingest.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ponzi
{
/// Relative sizes of the train / validation / test parts.
struct SplitSpec
{
    std::size_t train = 256;
    std::size_t val = 64;
    std::size_t test = 80;
    std::uint64_t seed = 0;

    std::size_t total() const noexcept { return train + val + test; }
};

/// Account indices of each part.
struct DatasetSplit
{
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
};

/// Seeded shuffle, then partition. When the dataset has exactly
/// spec.total() accounts the parts have exactly the spec's sizes; larger
/// datasets are split in the same proportions (test takes the rounding
/// remainder). Throws DataError if fewer than spec.total() accounts exist.
DatasetSplit split_dataset(std::size_t dataset_size, const SplitSpec& spec);

std::vector<AccountData> select(std::span<const AccountData> accounts, std::span<const std::size_t> indices);

/// Per-scale F1 of one method, possibly over several seeded runs.
struct ScaleReport
{
    std::string method;
    std::size_t delta = 0;
    /// runs[r][k] is the F1 of run r on scale k + 1.
    std::vector<std::vector<double>> runs;

    std::size_t scales() const noexcept { return runs.empty() ? 0 : runs.front().size(); }
    std::vector<double> mean() const;
};

nlohmann::json to_json(const ScaleReport& r);

/// F1 on each per-scale test set (one run).
std::vector<double> evaluate_per_scale(const DualChannelModel& model, const AugmentedSplit& test);

struct ThresholdResult
{
    std::size_t scale = 0;
    std::size_t transactions = 0;
    /// False when only the last scale satisfies the tolerance.
    bool stabilized = true;
};

/// Smallest scale s such that |F1(k) - F1(m)| <= epsilon for every k >= s.
/// Needs at least 3 scales.
ThresholdResult threshold_report(std::span<const double> f1, std::size_t delta, double epsilon);

/// Named model variant of an ablation grid.
struct MethodSpec
{
    std::string name;
    Channels channels = Channels::Dual;
    bool use_code_mlp = true;
};

/// "code-only", "trans-only", "dual-no-mlp" or "dual".
MethodSpec method_from_string(std::string_view name);

struct ExperimentConfig
{
    enum class DataKind
    {
        Synthetic,
        Files,
    };

    DataKind data = DataKind::Synthetic;
    // Files
    std::filesystem::path tx_dir;
    std::filesystem::path bytecode_dir;
    std::filesystem::path labels_file;
    std::size_t min_transactions = 100;
    // Synthetic
    std::size_t synth_ponzi = 75;
    std::size_t synth_normal = 325;
    std::uint64_t synth_seed = 0;

    TeaugParams teaug;
    SplitSpec split;
    DualChannelConfig model;
    std::vector<std::string> methods{"dual"};
    /// Run r re-seeds model init and batch order with model.seed + r; the
    /// data split stays fixed.
    std::size_t repeats = 5;
    double epsilon = 0.005;
    std::filesystem::path output_dir = "runs/default";
    bool save_checkpoints = true;
};

void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct ExperimentResult
{
    std::vector<ScaleReport> reports;
    /// Threshold of each report's mean curve.
    std::vector<ThresholdResult> thresholds;
    std::filesystem::path run_dir;
};

/// Loads or generates data, then split, augment, train and evaluate every
/// method for every repeat, writing into config.output_dir:
///   config.json      snapshot of the configuration
///   split.json       account addresses of each part
///   metrics.csv      method,run,f1_scale_1..f1_scale_m (run = "mean" for averages)
///   metrics.json     the same reports plus thresholds
///   f1_curve.csv     scale,transactions,<method means...>
///   threshold.json   recommended reporting threshold per method
///   history.csv      per-epoch loss and validation F1
///   checkpoints/     <method>_run<r>.json
///   run.log          stage log including label distributions
/// Any stage error is rethrown as Error prefixed with the stage name.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Loads the configured dataset (files or synthetic).
Dataset load_experiment_data(const ExperimentConfig& config);

/// Renders reports as metrics.csv content.
std::string metrics_csv(std::span<const ScaleReport> reports);
}  // namespace ponzi
