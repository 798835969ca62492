// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/bytecode.hpp"
#include "ponzi/tx_ingest.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ponzi
{
enum class NodeRole : std::uint8_t
{
    Target,          // the contract account the graph is centred on
    ExternallyOwned,
    Contract,        // another contract account
};

std::string_view to_string(NodeRole role) noexcept;

struct GraphNode
{
    Address address;
    NodeRole role = NodeRole::ExternallyOwned;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct TxEdge
{
    std::size_t src = 0;
    std::size_t dst = 0;
    Wei value;
    std::uint64_t timestamp = 0;
    std::size_t index = 0;

    friend bool operator==(const TxEdge&, const TxEdge&) = default;
};

/// Contract-centric transaction graph. Node 0 is always the target; the
/// remaining nodes appear in order of first involvement under (timestamp,
/// index) order, and edges are stored in that order too.
struct MicroTxGraph
{
    Address target;
    std::vector<GraphNode> nodes;
    std::vector<TxEdge> edges;
    int label = 0;
    OpcodeHistogram code;
};

/// Parallel transactions between one ordered pair of accounts.
struct MergedEdge
{
    std::size_t src = 0;
    std::size_t dst = 0;
    Wei total_value;
    std::size_t tx_count = 0;
    std::uint64_t first_timestamp = 0;

    friend bool operator==(const MergedEdge&, const MergedEdge&) = default;
};

inline constexpr std::size_t kNumNodeFeatures = 15;

/// Column names of the node feature matrix, in column order.
extern const std::array<std::string_view, kNumNodeFeatures> kNodeFeatureNames;

using FeatureMatrix = Eigen::MatrixXd;

/// Micro graph after merging parallel edges. Merged edges are sorted by
/// (src, dst).
struct LightGraph
{
    Address target;
    std::vector<GraphNode> nodes;
    std::vector<MergedEdge> edges;
    FeatureMatrix node_features;  // nodes x 15
    int label = 0;
    OpcodeHistogram code;
    /// Raw transactions the graph was built from.
    std::size_t tx_count = 0;
};

/// Builds the micro graph from records touching `target`. Counterparties
/// listed in `contracts` are flagged as contracts, everything else as EOAs.
/// Throws DataError on empty input.
MicroTxGraph build_micro_graph(std::string_view target, std::span<const TxRecord> records,
    const OpcodeHistogram& code, int label, const std::set<Address>* contracts = nullptr);

/// Per-node statistics over the raw edges of g, |V| x 15:
///   0 in_degree, 1 out_degree, 2 total_degree, 3 in_value_sum,
///   4 out_value_sum, 5 value_balance (in - out), 6 in_value_mean,
///   7 out_value_mean, 8 in_value_max, 9 out_value_max,
///   10 unique_in_counterparties, 11 unique_out_counterparties,
///   12 lifetime_seconds (last - first incident timestamp),
///   13 tx_frequency (total_degree / max(lifetime, 1)), 14 is_contract.
/// Values are in wei. A self-transfer counts as both incoming and outgoing.
FeatureMatrix node_features(const MicroTxGraph& g);

/// Merges parallel edges and attaches node features.
LightGraph merge_multi_edges(const MicroTxGraph& g);

nlohmann::json to_json(const LightGraph& g);
}  // namespace ponzi
