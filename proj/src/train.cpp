// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/train.hpp"

#include "ponzi/error.hpp"
#include "ponzi/metrics.hpp"
#include "ponzi/nn/adam.hpp"
#include "ponzi/rng.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace ponzi
{
namespace
{
constexpr std::uint64_t kShuffleStream = 1ULL << 32;
constexpr std::uint64_t kDropoutStream = 2ULL << 32;

double f1_of(const nn::Matrix& log_probs, std::span<const int> labels)
{
    std::vector<int> pred(labels.size());
    for (Eigen::Index i = 0; i < log_probs.rows(); ++i)
        pred[static_cast<std::size_t>(i)] = log_probs(i, 1) > log_probs(i, 0) ? 1 : 0;
    return f1_score(pred, labels);
}

double mean_nll(const nn::Matrix& log_probs, std::span<const int> labels)
{
    double loss = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        loss -= log_probs(static_cast<Eigen::Index>(i), labels[i]);
    return labels.empty() ? 0.0 : loss / static_cast<double>(labels.size());
}
}  // namespace

double evaluate_loss(const DualChannelModel& model, std::span<const LightGraph> graphs)
{
    const auto batch = make_batch(graphs, model.scaler, model.config().symmetrize);
    return mean_nll(model.log_probs(batch), batch.labels);
}

TrainResult train(DualChannelModel model, std::span<const LightGraph> train, std::span<const LightGraph> val)
{
    const auto cfg = model.config();
    if (train.empty())
        throw DataError("training set is empty");
    model.scaler = FeatureScaler::fit(train);

    std::vector<double> class_weights;
    if (cfg.class_weighted)
    {
        const auto pos = static_cast<double>(std::count_if(
            train.begin(), train.end(), [](const LightGraph& g) { return g.label == 1; }));
        const auto n = static_cast<double>(train.size());
        const double neg = n - pos;
        class_weights = {neg > 0 ? n / (2.0 * neg) : 1.0, pos > 0 ? n / (2.0 * pos) : 1.0};
    }

    auto params = model.parameters();
    nn::Adam adam(params, {cfg.lr, 0.9, 0.999, 1e-8, cfg.l2});

    const auto val_batch = val.empty() ? GraphBatch{} : make_batch(val, model.scaler, cfg.symmetrize);

    TrainResult result{model, {}};
    double best_f1 = -1.0;
    double best_loss = std::numeric_limits<double>::infinity();

    std::vector<std::size_t> order(train.size());
    std::vector<const LightGraph*> members;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch)
    {
        std::iota(order.begin(), order.end(), std::size_t{0});
        CounterRng(cfg.seed, kShuffleStream + epoch).shuffle(order.begin(), order.end());
        CounterRng dropout_rng(cfg.seed, kDropoutStream + epoch);

        double loss_sum = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size, ++batch_index)
        {
            const auto stop = std::min(order.size(), start + cfg.batch_size);
            members.clear();
            for (std::size_t k = start; k < stop; ++k)
                members.push_back(&train[order[k]]);
            const auto batch = make_batch(std::span<const LightGraph* const>(members), model.scaler, cfg.symmetrize);
            try
            {
                nn::Tape tape;
                const auto lp = model.forward(tape, batch, Mode::Train, &dropout_rng);
                const auto loss = nn::nll_loss(tape, lp, batch.labels, class_weights);
                tape.backward(loss);
                adam.zero_grad();
                tape.accumulate_into(params);
                adam.step();
                loss_sum += tape.value(loss)(0, 0) * static_cast<double>(batch.size());
            }
            catch (const NumericError& e)
            {
                throw NumericError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                                   std::to_string(batch_index) + ": " + e.what());
            }
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = loss_sum / static_cast<double>(train.size());
        if (!val.empty())
        {
            const auto lp = model.log_probs(val_batch);
            rec.val_f1 = f1_of(lp, val_batch.labels);
            rec.val_loss = mean_nll(lp, val_batch.labels);
        }
        result.history.epochs.push_back(rec);

        const bool better = val.empty() || rec.val_f1 > best_f1 || (rec.val_f1 == best_f1 && rec.val_loss < best_loss);
        if (better)
        {
            best_f1 = rec.val_f1;
            best_loss = rec.val_loss;
            result.model = model;
            result.history.best_epoch = epoch;
            result.history.best_val_f1 = rec.val_f1;
        }
    }
    if (cfg.epochs == 0)
        result.model = model;
    return result;
}
}  // namespace ponzi
