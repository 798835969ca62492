// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/tx_ingest.hpp"

#include <cstddef>
#include <cstdint>

namespace ponzi
{
struct SynthOptions
{
    std::size_t n_ponzi = 75;
    std::size_t n_normal = 325;
    std::size_t delta = 10;
    std::size_t steps = 10;
    std::uint64_t seed = 0;
};

/// Generates a labeled dataset for desk-scale experiments.
///
/// Ponzi accounts: bytecode leaning towards RETURNDATASIZE/RETURNDATACOPY
/// and value-moving instructions, and a star of investors paying in while
/// the contract pays earlier investors out of later deposits. A payout
/// never exceeds the balance accumulated from strictly earlier deposits.
///
/// Normal accounts: opcode noise around a common profile, and mixed
/// traffic with repeat users, zero-value calls and a few contract
/// counterparties.
///
/// Every account has at least delta * steps records. Output depends only
/// on the options.
Dataset synth_generate(const SynthOptions& options);
}  // namespace ponzi
