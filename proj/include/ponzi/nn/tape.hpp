// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ponzi::nn
{
using Matrix = Eigen::MatrixXd;

/// Trainable tensor with its accumulated gradient.
struct ParamTensor
{
    std::string name;
    Matrix value;
    Matrix grad;

    ParamTensor() = default;
    ParamTensor(std::string name_, Matrix value_)
      : name{std::move(name_)}, value{std::move(value_)}, grad{Matrix::Zero(value.rows(), value.cols())}
    {}

    void zero_grad() { grad.setZero(value.rows(), value.cols()); }
};

/// Handle to a value recorded on a Tape.
struct Var
{
    std::size_t id = static_cast<std::size_t>(-1);
};

/// Reverse-mode recording of one forward pass.
///
/// Every recorded value is checked for NaN/Inf and the op that produced it is
/// named in the resulting NumericError. A Tape is single-use: record the
/// forward pass, call backward() once, then discard it.
class Tape
{
public:
    /// Propagates `out_grad` (the gradient of the op's output) to the op's
    /// inputs via Tape::accumulate.
    using BackwardFn = std::function<void(Tape&, const Matrix& out_grad)>;

    Var constant(Matrix value, std::string_view name = "constant");

    /// Leaf bound to a parameter. Binding the same parameter several times
    /// is allowed; param_grad() sums over every binding.
    Var param(const ParamTensor& p);

    Var record(std::string_view op, Matrix value, BackwardFn backward);

    const Matrix& value(Var v) const;

    /// Gradient accumulated so far for `v`; empty if none reached it.
    const Matrix& grad(Var v) const;

    void accumulate(Var v, const Matrix& delta);
    /// False for constants; accumulate() ignores them and ops may skip
    /// computing their gradient.
    bool requires_grad(Var v) const;

    /// Seeds d(loss)/d(loss) = 1 and runs every backward function in reverse
    /// recording order. `loss` must be 1x1.
    void backward(Var loss);

    /// d(loss)/d(p) after backward(); zeros if p never reached the loss.
    Matrix param_grad(const ParamTensor& p) const;

    /// Adds param_grad(p) into p.grad for each parameter.
    void accumulate_into(std::span<ParamTensor* const> params) const;

    std::size_t size() const noexcept { return nodes_.size(); }

private:
    struct Node
    {
        std::string op;
        Matrix value;
        Matrix grad;
        BackwardFn backward;
        const ParamTensor* param = nullptr;
    };

    const Node& node(Var v) const;

    std::vector<Node> nodes_;
};
}  // namespace ponzi::nn
