// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/nn/tape.hpp"

#include <nlohmann/json.hpp>

#include <span>

namespace ponzi::nn
{
inline constexpr int kCheckpointVersion = 1;

/// {"version": 1, "tensors": [{"name", "rows", "cols", "data" (row-major)}]}.
/// Doubles are written in shortest round-trip form, so loading restores
/// every value bit for bit.
nlohmann::json tensors_to_json(std::span<const ParamTensor* const> params);

/// Loads values into `params` by name. Throws ShapeError when the stored
/// shape table differs from the parameters' shapes (missing, extra or
/// mis-shaped tensors).
void tensors_from_json(const nlohmann::json& j, std::span<ParamTensor* const> params);
}  // namespace ponzi::nn
