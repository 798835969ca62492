// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/graph.hpp"

#include "ponzi/error.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace ponzi
{
const std::array<std::string_view, kNumNodeFeatures> kNodeFeatureNames = {"in_degree",
    "out_degree", "total_degree", "in_value_sum", "out_value_sum", "value_balance",
    "in_value_mean", "out_value_mean", "in_value_max", "out_value_max",
    "unique_in_counterparties", "unique_out_counterparties", "lifetime_seconds",
    "tx_frequency", "is_contract"};

std::string_view to_string(NodeRole role) noexcept
{
    switch (role)
    {
    case NodeRole::Target:
        return "target";
    case NodeRole::ExternallyOwned:
        return "eoa";
    case NodeRole::Contract:
        return "contract";
    }
    return "unknown";
}

MicroTxGraph build_micro_graph(std::string_view target, std::span<const TxRecord> records,
    const OpcodeHistogram& code, int label, const std::set<Address>* contracts)
{
    if (records.empty())
        throw DataError("cannot build a transaction graph for " + std::string{target} +
                        " from zero transactions");

    std::vector<const TxRecord*> order;
    order.reserve(records.size());
    for (const auto& r : records)
        order.push_back(&r);
    std::sort(order.begin(), order.end(),
        [](const TxRecord* a, const TxRecord* b) { return chronological_less(*a, *b); });

    MicroTxGraph g;
    g.target = normalize_address(target);
    g.label = label;
    g.code = code;
    g.nodes.push_back({g.target, NodeRole::Target});

    std::unordered_map<Address, std::size_t> ids;
    ids.emplace(g.target, 0);
    const auto node_id = [&](const Address& addr) {
        if (const auto it = ids.find(addr); it != ids.end())
            return it->second;
        const bool is_contract = contracts != nullptr && contracts->contains(addr);
        g.nodes.push_back({addr, is_contract ? NodeRole::Contract : NodeRole::ExternallyOwned});
        ids.emplace(addr, g.nodes.size() - 1);
        return g.nodes.size() - 1;
    };

    g.edges.reserve(order.size());
    for (const auto* r : order)
    {
        const auto src = node_id(r->from);
        const auto dst = node_id(r->to);
        g.edges.push_back({src, dst, r->value, r->timestamp, r->index});
    }
    return g;
}

FeatureMatrix node_features(const MicroTxGraph& g)
{
    const auto n = g.nodes.size();
    std::vector<Wei> in_sum(n), out_sum(n), in_max(n), out_max(n);
    std::vector<std::size_t> in_deg(n, 0), out_deg(n, 0);
    std::vector<std::set<std::size_t>> in_peers(n), out_peers(n);
    std::vector<std::uint64_t> first(n, UINT64_MAX), last(n, 0);

    const auto touch = [&](std::size_t v, std::uint64_t t) {
        first[v] = std::min(first[v], t);
        last[v] = std::max(last[v], t);
    };
    for (const auto& e : g.edges)
    {
        ++out_deg[e.src];
        out_sum[e.src] += e.value;
        if (e.value > out_max[e.src])
            out_max[e.src] = e.value;
        out_peers[e.src].insert(e.dst);

        ++in_deg[e.dst];
        in_sum[e.dst] += e.value;
        if (e.value > in_max[e.dst])
            in_max[e.dst] = e.value;
        in_peers[e.dst].insert(e.src);

        touch(e.src, e.timestamp);
        touch(e.dst, e.timestamp);
    }

    FeatureMatrix x = FeatureMatrix::Zero(static_cast<Eigen::Index>(n), kNumNodeFeatures);
    for (std::size_t v = 0; v < n; ++v)
    {
        const auto row = static_cast<Eigen::Index>(v);
        const double in_d = static_cast<double>(in_deg[v]);
        const double out_d = static_cast<double>(out_deg[v]);
        const double in_v = in_sum[v].convert_to<double>();
        const double out_v = out_sum[v].convert_to<double>();
        const double lifetime = in_deg[v] + out_deg[v] > 0 ? static_cast<double>(last[v] - first[v]) : 0.0;
        x(row, 0) = in_d;
        x(row, 1) = out_d;
        x(row, 2) = in_d + out_d;
        x(row, 3) = in_v;
        x(row, 4) = out_v;
        x(row, 5) = (in_sum[v] - out_sum[v]).convert_to<double>();
        x(row, 6) = in_deg[v] > 0 ? in_v / in_d : 0.0;
        x(row, 7) = out_deg[v] > 0 ? out_v / out_d : 0.0;
        x(row, 8) = in_max[v].convert_to<double>();
        x(row, 9) = out_max[v].convert_to<double>();
        x(row, 10) = static_cast<double>(in_peers[v].size());
        x(row, 11) = static_cast<double>(out_peers[v].size());
        x(row, 12) = lifetime;
        x(row, 13) = (in_d + out_d) / std::max(lifetime, 1.0);
        x(row, 14) = g.nodes[v].role == NodeRole::ExternallyOwned ? 0.0 : 1.0;
    }
    return x;
}

LightGraph merge_multi_edges(const MicroTxGraph& g)
{
    LightGraph light;
    light.target = g.target;
    light.nodes = g.nodes;
    light.label = g.label;
    light.code = g.code;
    light.tx_count = g.edges.size();

    std::map<std::pair<std::size_t, std::size_t>, MergedEdge> merged;
    for (const auto& e : g.edges)
    {
        auto [it, fresh] = merged.try_emplace({e.src, e.dst});
        auto& m = it->second;
        if (fresh)
        {
            m.src = e.src;
            m.dst = e.dst;
            m.first_timestamp = e.timestamp;
        }
        m.total_value += e.value;
        ++m.tx_count;
        m.first_timestamp = std::min(m.first_timestamp, e.timestamp);
    }
    light.edges.reserve(merged.size());
    for (auto& [key, edge] : merged)
        light.edges.push_back(std::move(edge));
    light.node_features = node_features(g);
    return light;
}

nlohmann::json to_json(const LightGraph& g)
{
    nlohmann::json j;
    j["target"] = g.target;
    j["label"] = g.label;
    j["tx_count"] = g.tx_count;
    auto& nodes = j["nodes"] = nlohmann::json::array();
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
    {
        nlohmann::json node{{"id", v}, {"address", g.nodes[v].address},
            {"role", to_string(g.nodes[v].role)}};
        auto& feats = node["features"] = nlohmann::json::object();
        for (std::size_t f = 0; f < kNumNodeFeatures; ++f)
            feats[std::string{kNodeFeatureNames[f]}] =
                g.node_features(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(f));
        nodes.push_back(std::move(node));
    }
    auto& edges = j["edges"] = nlohmann::json::array();
    for (const auto& e : g.edges)
        edges.push_back({{"src", e.src}, {"dst", e.dst}, {"total_value", e.total_value.str()},
            {"tx_count", e.tx_count}, {"first_timestamp", e.first_timestamp}});
    j["code_counts"] = g.code.counts;
    return j;
}
}  // namespace ponzi
