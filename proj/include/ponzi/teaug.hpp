// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/graph.hpp"
#include "ponzi/tx_ingest.hpp"

#include <cstddef>
#include <set>
#include <span>
#include <string_view>
#include <vector>

namespace ponzi
{
/// Temporal evolution augmentation parameters: `steps` snapshots, snapshot
/// k holding the k * `delta` earliest transactions.
struct TeaugParams
{
    std::size_t delta = 10;
    std::size_t steps = 10;
};

struct ScaleSeries
{
    Address account;
    std::vector<MicroTxGraph> snapshots;  // snapshots[k-1] is scale k
    std::size_t delta = 0;
    std::size_t steps = 0;
};

/// Records sorted by (timestamp, index).
std::vector<TxRecord> chronological(std::span<const TxRecord> records);

/// Generates the nested snapshot series of one account. Throws DataError
/// when fewer than steps * delta records are available.
ScaleSeries teaug(std::span<const TxRecord> records, TeaugParams params, std::string_view target,
    const OpcodeHistogram& code, int label, const std::set<Address>* contracts = nullptr);

enum class SplitMode
{
    Train,
    Validation,
    Test,
};

/// Augmented graphs of one data split.
///
/// Train mode yields a single set mixing every scale. Validation and test
/// mode yield one set per scale; set i-1 holds exactly one scale-i snapshot
/// per account, in account order.
struct AugmentedSplit
{
    SplitMode mode = SplitMode::Train;
    TeaugParams params;
    std::vector<std::vector<LightGraph>> sets;

    /// All graphs of every set, account-major within each set.
    std::vector<LightGraph> pooled() const;
    std::size_t size() const noexcept;
};

AugmentedSplit augment_split(std::span<const AccountData> accounts, TeaugParams params,
    SplitMode mode, const std::set<Address>* contracts = nullptr);

/// Per-scale summary of an augmented collection.
struct ScaleStats
{
    std::size_t scale = 0;
    std::size_t transactions = 0;
    double avg_nodes = 0.0;
    double avg_edges = 0.0;  // merged edges
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

/// Statistics of every scale over all accounts.
std::vector<ScaleStats> scale_statistics(std::span<const AccountData> accounts, TeaugParams params,
    const std::set<Address>* contracts = nullptr);
}  // namespace ponzi
