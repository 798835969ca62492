// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/nn/adam.hpp"

#include "ponzi/error.hpp"

#include <cmath>

namespace ponzi::nn
{
Adam::Adam(std::vector<ParamTensor*> params, AdamOptions options)
  : params_{std::move(params)}, options_{options}
{
    for (auto* p : params_)
    {
        m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
        v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    }
}

void Adam::step()
{
    for (const auto* p : params_)
    {
        if (p->grad.rows() != p->value.rows() || p->grad.cols() != p->value.cols())
            throw ShapeError("parameter '" + p->name + "' has no gradient of matching shape");
        if (!p->grad.allFinite())
            throw NumericError("non-finite gradient in parameter '" + p->name + "'");
    }
    ++steps_;
    const double t = static_cast<double>(steps_);
    const double c1 = 1.0 - std::pow(options_.beta1, t);
    const double c2 = 1.0 - std::pow(options_.beta2, t);
    for (std::size_t i = 0; i < params_.size(); ++i)
    {
        auto& p = *params_[i];
        const Matrix g = p.grad + options_.weight_decay * p.value;
        m_[i] = options_.beta1 * m_[i] + (1.0 - options_.beta1) * g;
        v_[i] = options_.beta2 * v_[i] + (1.0 - options_.beta2) * g.cwiseProduct(g);
        const auto m_hat = m_[i].array() / c1;
        const auto v_hat = v_[i].array() / c2;
        p.value.array() -= options_.lr * m_hat / (v_hat.sqrt() + options_.eps);
    }
}

void Adam::zero_grad()
{
    for (auto* p : params_)
        p->zero_grad();
}
}  // namespace ponzi::nn
