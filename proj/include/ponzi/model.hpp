// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/graph.hpp"
#include "ponzi/nn/layers.hpp"
#include "ponzi/nn/ops.hpp"
#include "ponzi/nn/tape.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ponzi
{
enum class Backbone
{
    Gcn,
    Gat,
};

/// Which channels feed the classifier head.
enum class Channels
{
    Dual,       // code + transactions
    CodeOnly,   // code MLP only
    TransOnly,  // transaction GNN only
};

std::string_view to_string(Backbone b) noexcept;
std::string_view to_string(Channels c) noexcept;
Backbone backbone_from_string(std::string_view name);
Channels channels_from_string(std::string_view name);

struct DualChannelConfig
{
    std::size_t hidden_dim = 64;
    Backbone backbone = Backbone::Gcn;
    nn::PoolMode pooling = nn::PoolMode::Max;
    Channels channels = Channels::Dual;
    /// false feeds the standardized opcode vector straight into the head.
    bool use_code_mlp = true;
    double dropout = 0.1;
    double lr = 0.01;
    double l2 = 1e-5;
    std::size_t batch_size = 200;
    std::uint64_t seed = 0;
    std::size_t epochs = 50;
    double init_std = 0.1;
    std::size_t gat_heads = 1;
    double gat_slope = 0.2;
    /// Treat merged edges as undirected inside the GNN.
    bool symmetrize = true;
    /// Weight the loss by inverse class frequency of the training set.
    bool class_weighted = false;

    /// Throws Error when a field is outside its allowed set.
    void validate() const;
    std::string describe() const;
};

void to_json(nlohmann::json& j, const DualChannelConfig& c);
void from_json(const nlohmann::json& j, DualChannelConfig& c);

/// Per-column z-score statistics fitted on training graphs only.
struct FeatureScaler
{
    std::vector<double> code_mean, code_std;  // 76
    std::vector<double> node_mean, node_std;  // 15

    static FeatureScaler identity();
    /// Code statistics over one row per graph, node statistics over every
    /// node of every graph. Zero deviations are replaced by 1.
    static FeatureScaler fit(std::span<const LightGraph> graphs);

    nn::Matrix code_row(const LightGraph& g) const;
    nn::Matrix node_block(const LightGraph& g) const;
};

void to_json(nlohmann::json& j, const FeatureScaler& s);
void from_json(const nlohmann::json& j, FeatureScaler& s);

/// Disjoint union of standardized graphs ready for a forward pass.
struct GraphBatch
{
    nn::Matrix code;           // graphs x 76
    nn::Matrix node_features;  // total nodes x 15
    nn::Topology topology;
    nn::Segments segments;
    std::vector<int> labels;

    std::size_t size() const noexcept { return labels.size(); }
};

GraphBatch make_batch(std::span<const LightGraph* const> graphs, const FeatureScaler& scaler, bool symmetrize);
GraphBatch make_batch(std::span<const LightGraph> graphs, const FeatureScaler& scaler, bool symmetrize);

enum class Mode
{
    Train,
    Eval,
};

struct Prediction
{
    int label = 0;
    double ponzi_probability = 0.0;
};

/// Code MLP + two GNN layers + readout, concatenated into a linear head
/// followed by log-softmax.
class DualChannelModel
{
public:
    explicit DualChannelModel(DualChannelConfig config);

    const DualChannelConfig& config() const noexcept { return config_; }

    /// Batch log-probabilities (graphs x 2). `rng` drives dropout and is
    /// required in Train mode.
    nn::Var forward(nn::Tape& t, const GraphBatch& batch, Mode mode, CounterRng* rng = nullptr) const;

    /// Eval-mode log-probabilities of one graph, 1 x 2.
    nn::Matrix log_probs(const LightGraph& g) const;
    nn::Matrix log_probs(const GraphBatch& batch) const;

    std::vector<nn::ParamTensor*> parameters();
    std::vector<const nn::ParamTensor*> parameters() const;

    std::size_t head_input_dim() const noexcept;

    FeatureScaler scaler = FeatureScaler::identity();

    nlohmann::json to_json() const;
    static DualChannelModel from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static DualChannelModel load(const std::filesystem::path& path);

    nn::Linear code_mlp;
    nn::GcnLayer gcn1, gcn2;
    nn::GatLayer gat1, gat2;
    nn::GlobalAttentionPool attention_pool;
    nn::Linear head;

private:
    bool uses_code() const noexcept { return config_.channels != Channels::TransOnly; }
    bool uses_trans() const noexcept { return config_.channels != Channels::CodeOnly; }

    DualChannelConfig config_;
};

/// Label = argmax, probability = exp(log p(Ponzi)).
Prediction predict_from_log_probs(std::span<const double> log_probs);
Prediction predict(const DualChannelModel& model, const LightGraph& g);
std::vector<Prediction> predict(const DualChannelModel& model, std::span<const LightGraph> graphs);
}  // namespace ponzi
