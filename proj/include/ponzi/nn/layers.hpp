// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/nn/ops.hpp"
#include "ponzi/nn/tape.hpp"
#include "ponzi/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace ponzi::nn
{
enum class Activation
{
    Identity,
    Relu,
};

/// Training-time behaviour of a forward pass. Dropout is applied only when
/// `training` is set.
struct ForwardContext
{
    bool training = false;
    double dropout = 0.0;
    CounterRng* rng = nullptr;

    Var maybe_dropout(Tape& t, Var x) const;
};

/// Matrix of i.i.d. N(0, stddev^2) draws.
Matrix gaussian(std::size_t rows, std::size_t cols, double stddev, CounterRng& rng);

/// y = x W + b with W in x out.
struct Linear
{
    ParamTensor weight;
    ParamTensor bias;

    Linear() = default;
    Linear(const std::string& name, std::size_t in, std::size_t out, double init_std, CounterRng& rng);

    std::size_t in_dim() const noexcept { return static_cast<std::size_t>(weight.value.rows()); }
    std::size_t out_dim() const noexcept { return static_cast<std::size_t>(weight.value.cols()); }

    Var forward(Tape& t, Var x) const;
    std::vector<ParamTensor*> parameters();
};

struct DenseLayer
{
    Linear linear;
    Activation activation = Activation::Relu;
};

/// Affine-then-activation composition. Dropout follows every layer but the
/// last. Throws ShapeError naming the layer index on a dimension mismatch.
Var mlp_forward(Tape& t, Var x, std::span<const DenseLayer> layers, const ForwardContext& ctx);

/// H = ReLU(D^-1/2 (A + I) D^-1/2 X W + b), evaluated by message passing.
class GcnLayer
{
public:
    GcnLayer() = default;
    GcnLayer(const std::string& name, std::size_t in, std::size_t out, double init_std, CounterRng& rng);

    Var forward(Tape& t, Var x, const Topology& topo) const;
    std::vector<ParamTensor*> parameters();

    ParamTensor weight;
    ParamTensor bias;
};

/// Graph attention layer. Each head projects with its own W and scores
/// neighbours with LeakyReLU(a_dst . W x_i + a_src . W x_j). Heads are
/// concatenated (`concat_heads`) or averaged, then bias and ReLU follow.
class GatLayer
{
public:
    GatLayer() = default;
    GatLayer(const std::string& name, std::size_t in, std::size_t out, std::size_t heads,
        bool concat_heads, double slope, double init_std, CounterRng& rng);

    std::size_t output_dim() const noexcept;
    Var forward(Tape& t, Var x, const Topology& topo) const;
    std::vector<ParamTensor*> parameters();

    std::vector<ParamTensor> weight;    // in x out, per head
    std::vector<ParamTensor> att_src;   // out x 1, per head
    std::vector<ParamTensor> att_dst;   // out x 1, per head
    ParamTensor bias;
    bool concat_heads = true;
    double slope = 0.2;
};

/// Gated attention readout: weights = segment softmax of (H w + b), output
/// row g = sum of weights_i * H_i over graph g.
class GlobalAttentionPool
{
public:
    GlobalAttentionPool() = default;
    GlobalAttentionPool(const std::string& name, std::size_t dim, double init_std, CounterRng& rng);

    Var forward(Tape& t, Var h, const Segments& segments) const;
    std::vector<ParamTensor*> parameters();

    ParamTensor gate_weight;  // dim x 1
    ParamTensor gate_bias;    // 1 x 1
};

/// Readout of one row per graph. `attention` is required for
/// PoolMode::GlobalAttention and ignored otherwise.
Var graph_pool(Tape& t, Var h, const Segments& segments, PoolMode mode,
    const GlobalAttentionPool* attention = nullptr);
}  // namespace ponzi::nn
