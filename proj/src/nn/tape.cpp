// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/nn/tape.hpp"

#include "ponzi/error.hpp"

namespace ponzi::nn
{
Var Tape::constant(Matrix value, std::string_view name)
{
    return record(name, std::move(value), nullptr);
}

Var Tape::param(const ParamTensor& p)
{
    const Var v = record(p.name.empty() ? "param" : p.name, p.value, nullptr);
    nodes_.back().param = &p;
    return v;
}

Var Tape::record(std::string_view op, Matrix value, BackwardFn backward)
{
    if (!value.allFinite())
        throw NumericError("non-finite value produced by '" + std::string{op} + "'");
    nodes_.push_back({std::string{op}, std::move(value), Matrix{}, std::move(backward), nullptr});
    return Var{nodes_.size() - 1};
}

const Tape::Node& Tape::node(Var v) const
{
    if (v.id >= nodes_.size())
        throw Error("invalid tape variable");
    return nodes_[v.id];
}

const Matrix& Tape::value(Var v) const
{
    return node(v).value;
}

const Matrix& Tape::grad(Var v) const
{
    return node(v).grad;
}

bool Tape::requires_grad(Var v) const
{
    const auto& n = node(v);
    return n.backward || n.param != nullptr;
}

void Tape::accumulate(Var v, const Matrix& delta)
{
    auto& n = nodes_.at(v.id);
    if (!n.backward && n.param == nullptr)
        return;
    if (delta.rows() != n.value.rows() || delta.cols() != n.value.cols())
        throw ShapeError("gradient shape mismatch for '" + n.op + "'");
    if (n.grad.size() == 0)
        n.grad = delta;
    else
        n.grad += delta;
}

void Tape::backward(Var loss)
{
    const auto& l = node(loss);
    if (l.value.rows() != 1 || l.value.cols() != 1)
        throw ShapeError("backward() needs a scalar loss");
    nodes_[loss.id].grad = Matrix::Ones(1, 1);
    for (std::size_t i = loss.id + 1; i-- > 0;)
    {
        auto& n = nodes_[i];
        if (n.grad.size() == 0)
            continue;
        if (!n.grad.allFinite())
            throw NumericError("non-finite gradient reaching '" + n.op + "'");
        if (n.backward)
            n.backward(*this, n.grad);
    }
}

Matrix Tape::param_grad(const ParamTensor& p) const
{
    Matrix total = Matrix::Zero(p.value.rows(), p.value.cols());
    for (const auto& n : nodes_)
        if (n.param == &p && n.grad.size() != 0)
            total += n.grad;
    return total;
}

void Tape::accumulate_into(std::span<ParamTensor* const> params) const
{
    for (auto* p : params)
    {
        if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols())
            p->zero_grad();
        p->grad += param_grad(*p);
    }
}
}  // namespace ponzi::nn
