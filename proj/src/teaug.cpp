// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/teaug.hpp"

#include "ponzi/error.hpp"

#include <algorithm>

namespace ponzi
{
std::vector<TxRecord> chronological(std::span<const TxRecord> records)
{
    std::vector<TxRecord> sorted(records.begin(), records.end());
    std::sort(sorted.begin(), sorted.end(), chronological_less);
    return sorted;
}

ScaleSeries teaug(std::span<const TxRecord> records, TeaugParams params, std::string_view target,
    const OpcodeHistogram& code, int label, const std::set<Address>* contracts)
{
    if (params.delta == 0 || params.steps == 0)
        throw DataError("augmentation needs delta >= 1 and steps >= 1");
    const auto required = params.delta * params.steps;
    if (records.size() < required)
        throw DataError("account " + std::string{target} + " has " + std::to_string(records.size()) +
                        " transactions, augmentation requires " + std::to_string(required));

    // Only the earliest `required` records matter; a partial sort keeps the
    // order identical to a full sort on that prefix.
    std::vector<TxRecord> prefix(records.begin(), records.end());
    std::partial_sort(prefix.begin(), prefix.begin() + static_cast<std::ptrdiff_t>(required),
        prefix.end(), chronological_less);
    prefix.resize(required);

    ScaleSeries series;
    series.account = normalize_address(target);
    series.delta = params.delta;
    series.steps = params.steps;
    series.snapshots.reserve(params.steps);
    for (std::size_t k = 1; k <= params.steps; ++k)
    {
        const std::span<const TxRecord> head(prefix.data(), k * params.delta);
        series.snapshots.push_back(build_micro_graph(series.account, head, code, label, contracts));
    }
    return series;
}

std::vector<LightGraph> AugmentedSplit::pooled() const
{
    std::vector<LightGraph> out;
    out.reserve(size());
    for (const auto& set : sets)
        out.insert(out.end(), set.begin(), set.end());
    return out;
}

std::size_t AugmentedSplit::size() const noexcept
{
    std::size_t n = 0;
    for (const auto& set : sets)
        n += set.size();
    return n;
}

AugmentedSplit augment_split(std::span<const AccountData> accounts, TeaugParams params,
    SplitMode mode, const std::set<Address>* contracts)
{
    AugmentedSplit out;
    out.mode = mode;
    out.params = params;
    if (mode == SplitMode::Train)
        out.sets.resize(1);
    else
        out.sets.resize(params.steps);

    for (const auto& acc : accounts)
    {
        const auto series = teaug(acc.records, params, acc.address, acc.histogram, acc.label, contracts);
        for (std::size_t k = 0; k < series.snapshots.size(); ++k)
        {
            auto light = merge_multi_edges(series.snapshots[k]);
            if (mode == SplitMode::Train)
                out.sets.front().push_back(std::move(light));
            else
                out.sets[k].push_back(std::move(light));
        }
    }
    return out;
}

std::vector<ScaleStats> scale_statistics(std::span<const AccountData> accounts, TeaugParams params,
    const std::set<Address>* contracts)
{
    const auto aug = augment_split(accounts, params, SplitMode::Test, contracts);
    std::vector<ScaleStats> stats;
    for (std::size_t k = 0; k < aug.sets.size(); ++k)
    {
        ScaleStats s;
        s.scale = k + 1;
        s.transactions = (k + 1) * params.delta;
        double nodes = 0.0, edges = 0.0;
        for (const auto& g : aug.sets[k])
        {
            nodes += static_cast<double>(g.nodes.size());
            edges += static_cast<double>(g.edges.size());
            (g.label == 1 ? s.positives : s.negatives) += 1;
        }
        const auto n = static_cast<double>(aug.sets[k].size());
        s.avg_nodes = n > 0 ? nodes / n : 0.0;
        s.avg_edges = n > 0 ? edges / n : 0.0;
        stats.push_back(s);
    }
    return stats;
}
}  // namespace ponzi
