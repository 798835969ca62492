// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/nn/tape.hpp"

#include <cstddef>
#include <vector>

namespace ponzi::nn
{
struct AdamOptions
{
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// L2 penalty folded into the gradient (g + weight_decay * p) before the
    /// moment updates.
    double weight_decay = 1e-5;
};

/// Bias-corrected Adam over a fixed parameter list.
class Adam
{
public:
    Adam(std::vector<ParamTensor*> params, AdamOptions options = {});

    /// Applies one update from the accumulated gradients. Throws
    /// NumericError naming the parameter, without modifying anything, when
    /// any gradient is NaN or infinite.
    void step();
    void zero_grad();

    std::size_t step_count() const noexcept { return steps_; }
    const AdamOptions& options() const noexcept { return options_; }
    const std::vector<Matrix>& first_moments() const noexcept { return m_; }
    const std::vector<Matrix>& second_moments() const noexcept { return v_; }

private:
    std::vector<ParamTensor*> params_;
    AdamOptions options_;
    std::vector<Matrix> m_;
    std::vector<Matrix> v_;
    std::size_t steps_ = 0;
};
}  // namespace ponzi::nn
