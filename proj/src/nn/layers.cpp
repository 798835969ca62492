// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/nn/layers.hpp"

#include "ponzi/error.hpp"

namespace ponzi::nn
{
Var ForwardContext::maybe_dropout(Tape& t, Var x) const
{
    if (!training || dropout <= 0.0)
        return x;
    if (rng == nullptr)
        throw Error("training-mode dropout needs a random generator");
    return nn::dropout(t, x, dropout, *rng);
}

Matrix gaussian(std::size_t rows, std::size_t cols, double stddev, CounterRng& rng)
{
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rng.normal(0.0, stddev);
    return m;
}

Linear::Linear(const std::string& name, std::size_t in, std::size_t out, double init_std, CounterRng& rng)
  : weight{name + ".weight", gaussian(in, out, init_std, rng)},
    bias{name + ".bias", gaussian(1, out, init_std, rng)}
{}

Var Linear::forward(Tape& t, Var x) const
{
    return add_row(t, matmul(t, x, t.param(weight)), t.param(bias));
}

std::vector<ParamTensor*> Linear::parameters()
{
    return {&weight, &bias};
}

Var mlp_forward(Tape& t, Var x, std::span<const DenseLayer> layers, const ForwardContext& ctx)
{
    Var h = x;
    for (std::size_t i = 0; i < layers.size(); ++i)
    {
        const auto& layer = layers[i];
        const auto cols = static_cast<std::size_t>(t.value(h).cols());
        if (cols != layer.linear.in_dim())
            throw ShapeError("mlp layer " + std::to_string(i) + ": input has " + std::to_string(cols) +
                             " columns, layer expects " + std::to_string(layer.linear.in_dim()));
        h = layer.linear.forward(t, h);
        if (layer.activation == Activation::Relu)
            h = relu(t, h);
        if (i + 1 < layers.size())
            h = ctx.maybe_dropout(t, h);
    }
    return h;
}

GcnLayer::GcnLayer(const std::string& name, std::size_t in, std::size_t out, double init_std, CounterRng& rng)
  : weight{name + ".weight", gaussian(in, out, init_std, rng)},
    bias{name + ".bias", gaussian(1, out, init_std, rng)}
{}

Var GcnLayer::forward(Tape& t, Var x, const Topology& topo) const
{
    if (t.value(x).cols() != weight.value.rows())
        throw ShapeError("gcn layer '" + weight.name + "': input has " + std::to_string(t.value(x).cols()) +
                         " columns, expects " + std::to_string(weight.value.rows()));
    const Var projected = matmul(t, x, t.param(weight));
    return relu(t, add_row(t, gcn_propagate(t, projected, topo), t.param(bias)));
}

std::vector<ParamTensor*> GcnLayer::parameters()
{
    return {&weight, &bias};
}

GatLayer::GatLayer(const std::string& name, std::size_t in, std::size_t out, std::size_t heads,
    bool concat_heads_, double slope_, double init_std, CounterRng& rng)
  : concat_heads{concat_heads_}, slope{slope_}
{
    if (heads == 0)
        throw Error("GAT layer needs at least one head");
    for (std::size_t h = 0; h < heads; ++h)
    {
        const auto tag = name + ".head" + std::to_string(h);
        weight.emplace_back(tag + ".weight", gaussian(in, out, init_std, rng));
        att_src.emplace_back(tag + ".att_src", gaussian(out, 1, init_std, rng));
        att_dst.emplace_back(tag + ".att_dst", gaussian(out, 1, init_std, rng));
    }
    bias = ParamTensor{name + ".bias", gaussian(1, concat_heads ? out * heads : out, init_std, rng)};
}

std::size_t GatLayer::output_dim() const noexcept
{
    return static_cast<std::size_t>(bias.value.cols());
}

Var GatLayer::forward(Tape& t, Var x, const Topology& topo) const
{
    if (t.value(x).cols() != weight.front().value.rows())
        throw ShapeError("gat layer '" + bias.name + "': input has " + std::to_string(t.value(x).cols()) +
                         " columns, expects " + std::to_string(weight.front().value.rows()));
    Var combined{};
    for (std::size_t h = 0; h < weight.size(); ++h)
    {
        const Var projected = matmul(t, x, t.param(weight[h]));
        const Var src = matmul(t, projected, t.param(att_src[h]));
        const Var dst = matmul(t, projected, t.param(att_dst[h]));
        const Var head = gat_aggregate(t, projected, src, dst, topo, slope);
        if (h == 0)
            combined = head;
        else
            combined = concat_heads ? concat_cols(t, combined, head) : add(t, combined, head);
    }
    if (!concat_heads && weight.size() > 1)
        combined = scale(t, combined, 1.0 / static_cast<double>(weight.size()));
    return relu(t, add_row(t, combined, t.param(bias)));
}

std::vector<ParamTensor*> GatLayer::parameters()
{
    std::vector<ParamTensor*> out;
    for (std::size_t h = 0; h < weight.size(); ++h)
    {
        out.push_back(&weight[h]);
        out.push_back(&att_src[h]);
        out.push_back(&att_dst[h]);
    }
    out.push_back(&bias);
    return out;
}

GlobalAttentionPool::GlobalAttentionPool(const std::string& name, std::size_t dim, double init_std, CounterRng& rng)
  : gate_weight{name + ".gate_weight", gaussian(dim, 1, init_std, rng)},
    gate_bias{name + ".gate_bias", gaussian(1, 1, init_std, rng)}
{}

Var GlobalAttentionPool::forward(Tape& t, Var h, const Segments& segments) const
{
    const Var gate = add_row(t, matmul(t, h, t.param(gate_weight)), t.param(gate_bias));
    const Var weights = segment_softmax(t, gate, segments);
    return segment_weighted_sum(t, weights, h, segments);
}

std::vector<ParamTensor*> GlobalAttentionPool::parameters()
{
    return {&gate_weight, &gate_bias};
}

Var graph_pool(Tape& t, Var h, const Segments& segments, PoolMode mode, const GlobalAttentionPool* attention)
{
    if (mode != PoolMode::GlobalAttention)
        return segment_pool(t, h, segments, mode);
    if (attention == nullptr)
        throw Error("global attention pooling needs gate parameters");
    return attention->forward(t, h, segments);
}
}  // namespace ponzi::nn
