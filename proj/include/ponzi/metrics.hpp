// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace ponzi
{
/// F1 of the positive (Ponzi) class; 0 when precision + recall is 0.
/// Throws ShapeError on a length mismatch and DataError on a label or
/// prediction outside {0, 1}.
double f1_score(std::span<const int> predictions, std::span<const int> labels);
}  // namespace ponzi
