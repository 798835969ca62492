// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/error.hpp"
#include "ponzi/model.hpp"
#include "ponzi/train.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>
#include <random>

using namespace ponzi;
using nn::Matrix;

namespace
{
LightGraph random_graph(CounterRng& rng, int label, std::size_t records = 20)
{
    const auto rs = testing::random_records(rng, records, "0xt", 2 + rng.below(8));
    OpcodeHistogram code;
    for (std::size_t c = 0; c < kNumOpcodeCategories; ++c)
        code.counts[c] = c < 4 ? rng.below(20) : 10;
    // Positives carry a large CALL count: linearly separable on the code side.
    code.counts[category_index("CALL")] = label == 1 ? 200 + rng.below(50) : rng.below(5);
    for (const auto c : code.counts)
        code.total += c;
    return merge_multi_edges(build_micro_graph("0xt", rs, code, label));
}

// Same graph with node i moved to position perm[i].
LightGraph relabel(const LightGraph& g, const std::vector<std::size_t>& perm)
{
    LightGraph out = g;
    for (std::size_t i = 0; i < perm.size(); ++i)
    {
        out.nodes[perm[i]] = g.nodes[i];
        out.node_features.row(static_cast<Eigen::Index>(perm[i])) = g.node_features.row(static_cast<Eigen::Index>(i));
    }
    for (auto& e : out.edges)
    {
        e.src = perm[e.src];
        e.dst = perm[e.dst];
    }
    std::shuffle(out.edges.begin(), out.edges.end(), std::mt19937{7});
    return out;
}

std::vector<DualChannelConfig> variants()
{
    std::vector<DualChannelConfig> out;
    for (const auto backbone : {Backbone::Gcn, Backbone::Gat})
        for (const auto pool : {nn::PoolMode::Max, nn::PoolMode::Mean, nn::PoolMode::Sum, nn::PoolMode::GlobalAttention})
        {
            DualChannelConfig c;
            c.hidden_dim = 16;
            c.backbone = backbone;
            c.pooling = pool;
            c.gat_heads = 2;
            out.push_back(c);
        }
    return out;
}

double max_param_grad_error(DualChannelModel& model, const GraphBatch& batch)
{
    return testing::check_bound_gradients(model.parameters(), [&](nn::Tape& t) {
        return nn::nll_loss(t, model.forward(t, batch, Mode::Eval), batch.labels);
    }).max_rel_error;
}

bool same_parameters(const DualChannelModel& a, const DualChannelModel& b)
{
    const auto pa = a.parameters();
    const auto pb = b.parameters();
    if (pa.size() != pb.size())
        return false;
    for (std::size_t i = 0; i < pa.size(); ++i)
        if (pa[i]->name != pb[i]->name || pa[i]->value != pb[i]->value)
            return false;
    return true;
}
}  // namespace

TEST_CASE("log-probabilities are normalized")
{
    CounterRng rng(1, 0);
    for (const auto& cfg : variants())
    {
        const DualChannelModel model(cfg);
        for (int i = 0; i < 10; ++i)
        {
            const auto lp = model.log_probs(random_graph(rng, i % 2));
            REQUIRE(lp.rows() == 1);
            REQUIRE(lp.cols() == 2);
            CHECK(std::abs(lp.array().exp().sum() - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("zero head weights give even odds")
{
    CounterRng rng(2, 0);
    DualChannelModel model(DualChannelConfig{});
    model.head.weight.value.setZero();
    model.head.bias.value.setZero();
    const auto lp = model.log_probs(random_graph(rng, 1));
    CHECK(lp(0, 0) == doctest::Approx(std::log(0.5)));
    CHECK(lp(0, 1) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("node relabeling does not change the output")
{
    CounterRng rng(3, 0);
    for (const auto& cfg : variants())
    {
        const DualChannelModel model(cfg);
        for (int i = 0; i < 10; ++i)
        {
            const auto g = random_graph(rng, 0, 30);
            std::vector<std::size_t> perm(g.nodes.size());
            std::iota(perm.begin(), perm.end(), 0);
            rng.shuffle(perm.begin(), perm.end());
            const Matrix a = model.log_probs(g);
            const Matrix b = model.log_probs(relabel(g, perm));
            CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("no-MLP ablation with a zero code vector depends on transactions only")
{
    CounterRng rng(4, 0);
    DualChannelConfig cfg;
    cfg.hidden_dim = 16;
    cfg.use_code_mlp = false;
    DualChannelModel model(cfg);
    CHECK(model.head_input_dim() == kNumOpcodeCategories + 16);
    CHECK(model.code_mlp.weight.value.size() == 0);

    auto g = random_graph(rng, 1);
    g.code = {};
    const Matrix before = model.log_probs(g);
    model.head.weight.value.topRows(kNumOpcodeCategories) = testing::random_matrix(kNumOpcodeCategories, 2, rng);
    CHECK((model.log_probs(g) - before).cwiseAbs().maxCoeff() < 1e-15);

    DualChannelConfig code_only = cfg;
    code_only.channels = Channels::CodeOnly;
    code_only.use_code_mlp = true;
    CHECK(DualChannelModel(code_only).head_input_dim() == 16);
    DualChannelConfig trans_only = cfg;
    trans_only.channels = Channels::TransOnly;
    CHECK(DualChannelModel(trans_only).head_input_dim() == 16);
}

TEST_CASE("end-to-end gradients")
{
    CounterRng rng(5, 0);
    for (auto cfg : variants())
    {
        cfg.init_std = 0.5;
        DualChannelModel model(cfg);
        const std::vector<LightGraph> graphs{random_graph(rng, 1, 6), random_graph(rng, 0, 9)};
        model.scaler = FeatureScaler::fit(graphs);
        const auto batch = make_batch(graphs, model.scaler, cfg.symmetrize);
        INFO(cfg.describe());
        CHECK(max_param_grad_error(model, batch) < 1e-4);
    }
}

TEST_CASE("checkpoint round trip is bit-identical")
{
    CounterRng rng(6, 0);
    for (const auto& cfg : variants())
    {
        DualChannelModel model(cfg);
        std::vector<LightGraph> graphs;
        for (int i = 0; i < 8; ++i)
            graphs.push_back(random_graph(rng, i % 2));
        model.scaler = FeatureScaler::fit(graphs);
        const auto path = std::filesystem::temp_directory_path() / "ponzi_model_roundtrip.json";
        model.save(path);
        const auto back = DualChannelModel::load(path);
        CHECK(same_parameters(model, back));
        for (const auto& g : graphs)
            CHECK(model.log_probs(g) == back.log_probs(g));
    }
    CHECK_THROWS(DualChannelModel::load("/nonexistent/model.json"));
    CHECK_THROWS(DualChannelModel::from_json(nlohmann::json{{"kind", "other"}}));
}

TEST_CASE("predictions from log-probabilities")
{
    const std::vector<double> a = {std::log(0.9), std::log(0.1)};
    const auto pa = predict_from_log_probs(a);
    CHECK(pa.label == 0);
    CHECK(pa.ponzi_probability == doctest::Approx(0.1));
    const std::vector<double> b = {std::log(0.1), std::log(0.9)};
    const auto pb = predict_from_log_probs(b);
    CHECK(pb.label == 1);
    CHECK(pb.ponzi_probability == doctest::Approx(0.9));

    CounterRng rng(7, 0);
    for (int i = 0; i < 100; ++i)
    {
        const double l0 = rng.normal() * 3, l1 = rng.normal() * 3, shift = rng.normal() * 50;
        const auto lse = [](double x, double y) {
            const double m = std::max(x, y);
            return m + std::log(std::exp(x - m) + std::exp(y - m));
        };
        const std::vector<double> p = {l0 - lse(l0, l1), l1 - lse(l0, l1)};
        const std::vector<double> q = {l0 + shift - lse(l0 + shift, l1 + shift), l1 + shift - lse(l0 + shift, l1 + shift)};
        CHECK(predict_from_log_probs(p).label == predict_from_log_probs(q).label);
    }
}

TEST_CASE("config validation and json")
{
    DualChannelConfig c;
    CHECK_NOTHROW(c.validate());
    c.hidden_dim = 20;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK_THROWS_AS(DualChannelModel{c}, Error);
    c.hidden_dim = 32;
    c.dropout = 1.0;
    CHECK_THROWS_AS(c.validate(), Error);
    c.dropout = 0.1;
    c.batch_size = 0;
    CHECK_THROWS_AS(c.validate(), Error);

    DualChannelConfig d;
    d.hidden_dim = 128;
    d.backbone = Backbone::Gat;
    d.pooling = nn::PoolMode::GlobalAttention;
    d.channels = Channels::TransOnly;
    d.epochs = 3;
    nlohmann::json j = d;
    const auto back = j.get<DualChannelConfig>();
    CHECK(nlohmann::json(back) == j);
    CHECK(back.backbone == Backbone::Gat);
    CHECK(nlohmann::json::object().get<DualChannelConfig>().hidden_dim == DualChannelConfig{}.hidden_dim);
    CHECK_THROWS(backbone_from_string("gin"));
    CHECK(channels_from_string("code") == Channels::CodeOnly);
}

TEST_CASE("training")
{
    CounterRng rng(8, 0);
    std::vector<LightGraph> train_set, val_set;
    for (int i = 0; i < 60; ++i)
        train_set.push_back(random_graph(rng, i % 3 == 0));
    for (int i = 0; i < 20; ++i)
        val_set.push_back(random_graph(rng, i % 3 == 0));

    DualChannelConfig cfg;
    cfg.hidden_dim = 16;
    cfg.batch_size = 20;

    SUBCASE("zero epochs return the initial model")
    {
        cfg.epochs = 0;
        const DualChannelModel init(cfg);
        const auto r = train(DualChannelModel(cfg), train_set, val_set);
        CHECK(same_parameters(r.model, init));
        CHECK(r.history.epochs.empty());
        CHECK(r.history.best_epoch == 0);
    }
    SUBCASE("loss falls below 0.05 on separable data")
    {
        cfg.epochs = 200;
        const auto r = train(DualChannelModel(cfg), train_set, val_set);
        REQUIRE(r.history.epochs.size() == 200);
        double best = 1e9;
        for (const auto& e : r.history.epochs)
            best = std::min(best, e.train_loss);
        CHECK(best < 0.05);
        CHECK(r.history.best_val_f1 == doctest::Approx(1.0));
        CHECK(evaluate_loss(r.model, train_set) < 0.1);
    }
    SUBCASE("same seed, same history and parameters")
    {
        cfg.epochs = 5;
        const auto a = train(DualChannelModel(cfg), train_set, val_set);
        const auto b = train(DualChannelModel(cfg), train_set, val_set);
        REQUIRE(a.history.epochs.size() == b.history.epochs.size());
        for (std::size_t i = 0; i < a.history.epochs.size(); ++i)
        {
            CHECK(a.history.epochs[i].train_loss == b.history.epochs[i].train_loss);
            CHECK(a.history.epochs[i].val_f1 == b.history.epochs[i].val_f1);
        }
        CHECK(same_parameters(a.model, b.model));
    }
}
