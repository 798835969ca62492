// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/nn/tape.hpp"
#include "ponzi/rng.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace ponzi::nn
{
// Ops taking a Topology or Segments keep a reference to it for the backward
// pass; it must outlive Tape::backward().

/// Message-passing neighbourhoods in CSR form. The neighbourhood of node i
/// (the nodes whose features flow into i) is
/// `neighbors[offsets[i] .. offsets[i+1])`, sorted and always including i.
struct Topology
{
    std::size_t num_nodes = 0;
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> neighbors;

    /// From directed (src, dst) edges. With `symmetrize`, every edge also
    /// counts in the reverse direction; otherwise node i receives only from
    /// its in-neighbours. Duplicates and explicit self-edges collapse into
    /// the single implicit self-loop.
    static Topology build(std::size_t num_nodes,
        std::span<const std::pair<std::size_t, std::size_t>> edges, bool symmetrize);

    std::span<const std::size_t> neighborhood(std::size_t i) const
    {
        return {neighbors.data() + offsets[i], offsets[i + 1] - offsets[i]};
    }
    /// Neighbourhood size including the self-loop.
    std::size_t degree(std::size_t i) const { return offsets[i + 1] - offsets[i]; }
};

/// Contiguous node ranges, one per graph of a batch: graph g owns rows
/// [offsets[g], offsets[g+1]).
struct Segments
{
    std::vector<std::size_t> offsets{0};

    std::size_t count() const noexcept { return offsets.size() - 1; }
};

enum class PoolMode
{
    Max,
    Mean,
    Sum,
    GlobalAttention,
};

std::string_view to_string(PoolMode mode) noexcept;
PoolMode pool_mode_from_string(std::string_view name);

Var matmul(Tape& t, Var a, Var b);
Var add(Tape& t, Var a, Var b);
/// a + row, broadcasting a 1 x c row over every row of a.
Var add_row(Tape& t, Var a, Var row);
Var scale(Tape& t, Var a, double factor);
Var relu(Tape& t, Var a);
Var leaky_relu(Tape& t, Var a, double slope);
/// Inverted dropout: zeroes entries with probability `rate` and rescales the
/// rest by 1 / (1 - rate). Callers skip it in evaluation mode.
Var dropout(Tape& t, Var a, double rate, CounterRng& rng);
Var concat_cols(Tape& t, Var a, Var b);
Var log_softmax_rows(Tape& t, Var a);

/// Mean negative log-likelihood of `labels` under row-wise log-probabilities.
/// With class weights, a weighted mean (sum w_y * nll / sum w_y). Throws
/// Error when a row's logsumexp differs from 0 by more than 1e-9.
Var nll_loss(Tape& t, Var log_probs, std::span<const int> labels,
    std::span<const double> class_weights = {});

/// Symmetric-normalised aggregation: out_i = sum_{j in N(i)} x_j / sqrt(d_i d_j).
Var gcn_propagate(Tape& t, Var x, const Topology& topo);

/// Attention aggregation of one head. For each node i and j in N(i):
/// e_ij = LeakyReLU(dst_score_i + src_score_j), alpha_i = softmax_j(e_ij),
/// out_i = sum_j alpha_ij * features_j. Scores are n x 1.
Var gat_aggregate(Tape& t, Var features, Var src_score, Var dst_score, const Topology& topo,
    double slope);

/// Column-wise max / mean / sum over each segment; one output row per segment.
Var segment_pool(Tape& t, Var h, const Segments& segments, PoolMode mode);

/// Softmax of an n x 1 score column within each segment.
Var segment_softmax(Tape& t, Var scores, const Segments& segments);

/// Row g = sum over segment g of weights_i * h_i; weights are n x 1.
Var segment_weighted_sum(Tape& t, Var weights, Var h, const Segments& segments);
}  // namespace ponzi::nn
