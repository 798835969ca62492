// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/graph.hpp"
#include "ponzi/model.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace ponzi
{
struct EpochRecord
{
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_f1 = 0.0;
};

struct TrainHistory
{
    std::vector<EpochRecord> epochs;
    /// Epoch of the returned parameters; 0 means the initial model.
    std::size_t best_epoch = 0;
    double best_val_f1 = 0.0;
};

struct TrainResult
{
    DualChannelModel model;
    TrainHistory history;
};

/// Mini-batch Adam on the pooled training graphs with the model's config.
///
/// Feature statistics are fitted on `train` and stored in the model. After
/// every epoch the pooled validation F1 is measured; the parameters of the
/// best epoch (highest F1, ties to the lower validation loss, then the
/// earlier epoch) are returned. The batch order for epoch e is a shuffle
/// drawn from stream e of the config seed, so equal inputs give equal
/// results. A non-finite loss or gradient aborts with the epoch, batch and
/// failing op or parameter in the message.
TrainResult train(DualChannelModel model, std::span<const LightGraph> train,
    std::span<const LightGraph> val);

/// Mean NLL of the model over `graphs` in eval mode.
double evaluate_loss(const DualChannelModel& model, std::span<const LightGraph> graphs);
}  // namespace ponzi
