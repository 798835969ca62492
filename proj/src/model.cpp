// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/model.hpp"

#include "ponzi/error.hpp"
#include "ponzi/nn/checkpoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace ponzi
{
namespace
{
// Stream ids of the counter-based generator.
constexpr std::uint64_t kInitStream = 1;

constexpr std::size_t kAllowedHidden[] = {16, 32, 64, 128};
}  // namespace

std::string_view to_string(Backbone b) noexcept
{
    return b == Backbone::Gcn ? "gcn" : "gat";
}

std::string_view to_string(Channels c) noexcept
{
    switch (c)
    {
    case Channels::Dual:
        return "dual";
    case Channels::CodeOnly:
        return "code";
    case Channels::TransOnly:
        return "trans";
    }
    return "unknown";
}

Backbone backbone_from_string(std::string_view name)
{
    if (name == "gcn" || name == "GCN")
        return Backbone::Gcn;
    if (name == "gat" || name == "GAT")
        return Backbone::Gat;
    throw Error("unknown GNN backbone '" + std::string{name} + "'");
}

Channels channels_from_string(std::string_view name)
{
    for (const auto c : {Channels::Dual, Channels::CodeOnly, Channels::TransOnly})
        if (to_string(c) == name)
            return c;
    throw Error("unknown channel set '" + std::string{name} + "'");
}

void DualChannelConfig::validate() const
{
    if (std::find(std::begin(kAllowedHidden), std::end(kAllowedHidden), hidden_dim) == std::end(kAllowedHidden))
        throw Error("hidden_dim must be one of 16, 32, 64, 128; got " + std::to_string(hidden_dim));
    for (const double rate : {dropout, lr, l2})
        if (!(rate >= 0.0 && rate < 1.0))
            throw Error("dropout, lr and l2 must lie in [0, 1)");
    if (batch_size == 0)
        throw Error("batch_size must be positive");
    if (gat_heads == 0)
        throw Error("gat_heads must be positive");
    if (!(init_std > 0.0))
        throw Error("init_std must be positive");
}

std::string DualChannelConfig::describe() const
{
    std::string s{to_string(channels)};
    if (channels != Channels::CodeOnly)
        s += "-" + std::string{to_string(backbone)} + "-" + std::string{nn::to_string(pooling)};
    if (channels == Channels::Dual && !use_code_mlp)
        s += "-nomlp";
    s += "-h" + std::to_string(hidden_dim);
    return s;
}

void to_json(nlohmann::json& j, const DualChannelConfig& c)
{
    j = {{"hidden_dim", c.hidden_dim}, {"backbone", to_string(c.backbone)},
        {"pooling", nn::to_string(c.pooling)}, {"channels", to_string(c.channels)},
        {"use_code_mlp", c.use_code_mlp}, {"dropout", c.dropout}, {"lr", c.lr}, {"l2", c.l2},
        {"batch_size", c.batch_size}, {"seed", c.seed}, {"epochs", c.epochs}, {"init_std", c.init_std},
        {"gat_heads", c.gat_heads}, {"gat_slope", c.gat_slope}, {"symmetrize", c.symmetrize},
        {"class_weighted", c.class_weighted}};
}

void from_json(const nlohmann::json& j, DualChannelConfig& c)
{
    DualChannelConfig d;
    c.hidden_dim = j.value("hidden_dim", d.hidden_dim);
    c.backbone = backbone_from_string(j.value("backbone", std::string{to_string(d.backbone)}));
    c.pooling = nn::pool_mode_from_string(j.value("pooling", std::string{nn::to_string(d.pooling)}));
    c.channels = channels_from_string(j.value("channels", std::string{to_string(d.channels)}));
    c.use_code_mlp = j.value("use_code_mlp", d.use_code_mlp);
    c.dropout = j.value("dropout", d.dropout);
    c.lr = j.value("lr", d.lr);
    c.l2 = j.value("l2", d.l2);
    c.batch_size = j.value("batch_size", d.batch_size);
    c.seed = j.value("seed", d.seed);
    c.epochs = j.value("epochs", d.epochs);
    c.init_std = j.value("init_std", d.init_std);
    c.gat_heads = j.value("gat_heads", d.gat_heads);
    c.gat_slope = j.value("gat_slope", d.gat_slope);
    c.symmetrize = j.value("symmetrize", d.symmetrize);
    c.class_weighted = j.value("class_weighted", d.class_weighted);
}

FeatureScaler FeatureScaler::identity()
{
    FeatureScaler s;
    s.code_mean.assign(kNumOpcodeCategories, 0.0);
    s.code_std.assign(kNumOpcodeCategories, 1.0);
    s.node_mean.assign(kNumNodeFeatures, 0.0);
    s.node_std.assign(kNumNodeFeatures, 1.0);
    return s;
}

FeatureScaler FeatureScaler::fit(std::span<const LightGraph> graphs)
{
    if (graphs.empty())
        throw DataError("cannot fit feature statistics on zero graphs");
    FeatureScaler s = identity();
    const auto finish = [](std::vector<double>& mean, std::vector<double>& sd,
                            const std::vector<double>& sum, const std::vector<double>& sq, double n) {
        for (std::size_t c = 0; c < mean.size(); ++c)
        {
            mean[c] = sum[c] / n;
            const double var = std::max(sq[c] / n - mean[c] * mean[c], 0.0);
            const double d = std::sqrt(var);
            sd[c] = d > 1e-12 * std::max(1.0, std::abs(mean[c])) ? d : 1.0;
        }
    };

    // Two-pass with a shift keeps the variance accurate for wei-scale values.
    std::vector<double> shift(kNumNodeFeatures, 0.0);
    {
        const auto& first = graphs.front().node_features;
        for (std::size_t c = 0; c < kNumNodeFeatures; ++c)
            shift[c] = first(0, static_cast<Eigen::Index>(c));
    }
    std::vector<double> sum(kNumOpcodeCategories, 0.0), sq(kNumOpcodeCategories, 0.0);
    for (const auto& g : graphs)
        for (std::size_t c = 0; c < kNumOpcodeCategories; ++c)
        {
            const double v = static_cast<double>(g.code.counts[c]);
            sum[c] += v;
            sq[c] += v * v;
        }
    finish(s.code_mean, s.code_std, sum, sq, static_cast<double>(graphs.size()));

    std::vector<double> nsum(kNumNodeFeatures, 0.0), nsq(kNumNodeFeatures, 0.0);
    double nodes = 0.0;
    for (const auto& g : graphs)
    {
        for (Eigen::Index r = 0; r < g.node_features.rows(); ++r)
            for (std::size_t c = 0; c < kNumNodeFeatures; ++c)
            {
                const double v = g.node_features(r, static_cast<Eigen::Index>(c)) - shift[c];
                nsum[c] += v;
                nsq[c] += v * v;
            }
        nodes += static_cast<double>(g.node_features.rows());
    }
    finish(s.node_mean, s.node_std, nsum, nsq, nodes);
    for (std::size_t c = 0; c < kNumNodeFeatures; ++c)
        s.node_mean[c] += shift[c];
    return s;
}

nn::Matrix FeatureScaler::code_row(const LightGraph& g) const
{
    nn::Matrix row(1, static_cast<Eigen::Index>(kNumOpcodeCategories));
    for (std::size_t c = 0; c < kNumOpcodeCategories; ++c)
        row(0, static_cast<Eigen::Index>(c)) = (static_cast<double>(g.code.counts[c]) - code_mean[c]) / code_std[c];
    return row;
}

nn::Matrix FeatureScaler::node_block(const LightGraph& g) const
{
    if (g.node_features.cols() != static_cast<Eigen::Index>(kNumNodeFeatures))
        throw ShapeError("node features must have 15 columns");
    nn::Matrix x = g.node_features;
    for (std::size_t c = 0; c < kNumNodeFeatures; ++c)
    {
        const auto col = static_cast<Eigen::Index>(c);
        x.col(col) = (x.col(col).array() - node_mean[c]) / node_std[c];
    }
    return x;
}

void to_json(nlohmann::json& j, const FeatureScaler& s)
{
    j = {{"code_mean", s.code_mean}, {"code_std", s.code_std}, {"node_mean", s.node_mean},
        {"node_std", s.node_std}};
}

void from_json(const nlohmann::json& j, FeatureScaler& s)
{
    j.at("code_mean").get_to(s.code_mean);
    j.at("code_std").get_to(s.code_std);
    j.at("node_mean").get_to(s.node_mean);
    j.at("node_std").get_to(s.node_std);
    if (s.code_mean.size() != kNumOpcodeCategories || s.code_std.size() != kNumOpcodeCategories ||
        s.node_mean.size() != kNumNodeFeatures || s.node_std.size() != kNumNodeFeatures)
        throw ShapeError("feature scaler has the wrong dimensions");
}

GraphBatch make_batch(std::span<const LightGraph* const> graphs, const FeatureScaler& scaler, bool symmetrize)
{
    GraphBatch b;
    std::size_t total = 0;
    for (const auto* g : graphs)
    {
        if (g->nodes.empty())
            throw DataError("graph of " + g->target + " has no nodes");
        total += g->nodes.size();
    }
    b.code.resize(static_cast<Eigen::Index>(graphs.size()), static_cast<Eigen::Index>(kNumOpcodeCategories));
    b.node_features.resize(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(kNumNodeFeatures));
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < graphs.size(); ++i)
    {
        const auto& g = *graphs[i];
        b.code.row(static_cast<Eigen::Index>(i)) = scaler.code_row(g);
        b.node_features.middleRows(static_cast<Eigen::Index>(offset), static_cast<Eigen::Index>(g.nodes.size())) =
            scaler.node_block(g);
        for (const auto& e : g.edges)
            edges.emplace_back(offset + e.src, offset + e.dst);
        offset += g.nodes.size();
        b.segments.offsets.push_back(offset);
        b.labels.push_back(g.label);
    }
    b.topology = nn::Topology::build(total, edges, symmetrize);
    return b;
}

GraphBatch make_batch(std::span<const LightGraph> graphs, const FeatureScaler& scaler, bool symmetrize)
{
    std::vector<const LightGraph*> ptrs;
    ptrs.reserve(graphs.size());
    for (const auto& g : graphs)
        ptrs.push_back(&g);
    return make_batch(std::span<const LightGraph* const>(ptrs), scaler, symmetrize);
}

DualChannelModel::DualChannelModel(DualChannelConfig config)
  : config_{config}
{
    config_.validate();
    CounterRng rng(config_.seed, kInitStream);
    const auto hidden = config_.hidden_dim;
    const double sd = config_.init_std;
    if (uses_code() && config_.use_code_mlp)
        code_mlp = nn::Linear("code_mlp", kNumOpcodeCategories, hidden, sd, rng);
    if (uses_trans())
    {
        if (config_.backbone == Backbone::Gcn)
        {
            gcn1 = nn::GcnLayer("gnn1", kNumNodeFeatures, hidden, sd, rng);
            gcn2 = nn::GcnLayer("gnn2", hidden, hidden, sd, rng);
        }
        else
        {
            gat1 = nn::GatLayer("gnn1", kNumNodeFeatures, hidden, config_.gat_heads, true, config_.gat_slope, sd, rng);
            gat2 = nn::GatLayer("gnn2", gat1.output_dim(), hidden, config_.gat_heads, false, config_.gat_slope, sd, rng);
        }
        if (config_.pooling == nn::PoolMode::GlobalAttention)
            attention_pool = nn::GlobalAttentionPool("pool", hidden, sd, rng);
    }
    head = nn::Linear("head", head_input_dim(), 2, sd, rng);
}

std::size_t DualChannelModel::head_input_dim() const noexcept
{
    std::size_t dim = 0;
    if (uses_code())
        dim += config_.use_code_mlp ? config_.hidden_dim : kNumOpcodeCategories;
    if (uses_trans())
        dim += config_.hidden_dim;
    return dim;
}

nn::Var DualChannelModel::forward(nn::Tape& t, const GraphBatch& batch, Mode mode, CounterRng* rng) const
{
    const nn::ForwardContext ctx{mode == Mode::Train, config_.dropout, rng};
    if (batch.code.cols() != static_cast<Eigen::Index>(kNumOpcodeCategories))
        throw ShapeError("code features must have 76 columns");
    if (batch.node_features.cols() != static_cast<Eigen::Index>(kNumNodeFeatures))
        throw ShapeError("node features must have 15 columns");

    std::optional<nn::Var> code_part, trans_part;
    if (uses_code())
    {
        nn::Var z = t.constant(batch.code, "code_features");
        if (config_.use_code_mlp)
            z = ctx.maybe_dropout(t, nn::relu(t, code_mlp.forward(t, z)));
        code_part = z;
    }
    if (uses_trans())
    {
        const nn::Var x = t.constant(batch.node_features, "node_features");
        nn::Var h{};
        if (config_.backbone == Backbone::Gcn)
        {
            h = ctx.maybe_dropout(t, gcn1.forward(t, x, batch.topology));
            h = gcn2.forward(t, h, batch.topology);
        }
        else
        {
            h = ctx.maybe_dropout(t, gat1.forward(t, x, batch.topology));
            h = gat2.forward(t, h, batch.topology);
        }
        trans_part = nn::graph_pool(t, h, batch.segments, config_.pooling, &attention_pool);
    }
    nn::Var z = code_part && trans_part ? nn::concat_cols(t, *code_part, *trans_part)
                                        : (code_part ? *code_part : *trans_part);
    return nn::log_softmax_rows(t, head.forward(t, z));
}

nn::Matrix DualChannelModel::log_probs(const GraphBatch& batch) const
{
    nn::Tape t;
    return t.value(forward(t, batch, Mode::Eval));
}

nn::Matrix DualChannelModel::log_probs(const LightGraph& g) const
{
    const LightGraph* one[] = {&g};
    return log_probs(make_batch(std::span<const LightGraph* const>(one), scaler, config_.symmetrize));
}

std::vector<nn::ParamTensor*> DualChannelModel::parameters()
{
    std::vector<nn::ParamTensor*> out;
    const auto append = [&out](std::vector<nn::ParamTensor*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
    if (uses_code() && config_.use_code_mlp)
        append(code_mlp.parameters());
    if (uses_trans())
    {
        if (config_.backbone == Backbone::Gcn)
        {
            append(gcn1.parameters());
            append(gcn2.parameters());
        }
        else
        {
            append(gat1.parameters());
            append(gat2.parameters());
        }
        if (config_.pooling == nn::PoolMode::GlobalAttention)
            append(attention_pool.parameters());
    }
    append(head.parameters());
    return out;
}

std::vector<const nn::ParamTensor*> DualChannelModel::parameters() const
{
    auto mutable_params = const_cast<DualChannelModel&>(*this).parameters();
    return {mutable_params.begin(), mutable_params.end()};
}

nlohmann::json DualChannelModel::to_json() const
{
    const auto params = parameters();
    return {{"format", "ponzi-warning-model"}, {"config", config_}, {"scaler", scaler},
        {"params", nn::tensors_to_json(params)}};
}

DualChannelModel DualChannelModel::from_json(const nlohmann::json& j)
{
    if (j.value("format", std::string{}) != "ponzi-warning-model")
        throw Error("not a ponzi-warning model checkpoint");
    DualChannelModel model(j.at("config").get<DualChannelConfig>());
    model.scaler = j.at("scaler").get<FeatureScaler>();
    const auto params = model.parameters();
    nn::tensors_from_json(j.at("params"), params);
    return model;
}

void DualChannelModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot write checkpoint " + path.string());
    out << to_json().dump() << '\n';
}

DualChannelModel DualChannelModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot read checkpoint " + path.string());
    return from_json(nlohmann::json::parse(in));
}

Prediction predict_from_log_probs(std::span<const double> log_probs)
{
    if (log_probs.size() != 2)
        throw ShapeError("expected two log-probabilities");
    return {log_probs[1] > log_probs[0] ? 1 : 0, std::exp(log_probs[1])};
}

Prediction predict(const DualChannelModel& model, const LightGraph& g)
{
    const nn::Matrix lp = model.log_probs(g);
    const double row[] = {lp(0, 0), lp(0, 1)};
    return predict_from_log_probs(row);
}

std::vector<Prediction> predict(const DualChannelModel& model, std::span<const LightGraph> graphs)
{
    std::vector<Prediction> out;
    out.reserve(graphs.size());
    constexpr std::size_t kChunk = 256;
    for (std::size_t start = 0; start < graphs.size(); start += kChunk)
    {
        const auto chunk = graphs.subspan(start, std::min(kChunk, graphs.size() - start));
        const nn::Matrix lp = model.log_probs(make_batch(chunk, model.scaler, model.config().symmetrize));
        for (Eigen::Index i = 0; i < lp.rows(); ++i)
        {
            const double row[] = {lp(i, 0), lp(i, 1)};
            out.push_back(predict_from_log_probs(row));
        }
    }
    return out;
}
}  // namespace ponzi
