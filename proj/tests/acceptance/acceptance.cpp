// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS / FAIL / SKIP line per criterion.

#include "ponzi/bytecode.hpp"
#include "ponzi/experiment.hpp"
#include "ponzi/model.hpp"
#include "ponzi/nn/layers.hpp"
#include "ponzi/nn/ops.hpp"
#include "ponzi/teaug.hpp"
#include "reference.hpp"

#include <fmt/format.h>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace ponzi;
using nn::Matrix;
using nn::ParamTensor;
using nn::Tape;
using nn::Var;
namespace fs = std::filesystem;

namespace
{
enum class Status
{
    Pass,
    Fail,
    Skip,
};

struct Outcome
{
    Status status = Status::Fail;
    std::string detail;
};

Outcome pass_if(bool ok, std::string detail)
{
    return {ok ? Status::Pass : Status::Fail, std::move(detail)};
}

struct Timed
{
    Outcome outcome;
    double seconds = 0.0;
};

Timed timed(const std::function<Outcome()>& f)
{
    const auto start = std::chrono::steady_clock::now();
    Timed t;
    try
    {
        t.outcome = f();
    }
    catch (const std::exception& e)
    {
        t.outcome = {Status::Fail, std::string("exception: ") + e.what()};
    }
    t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return t;
}

int failures = 0;

void report(int id, const char* name, const Timed& t, double limit_seconds)
{
    auto status = t.outcome.status;
    std::string detail = t.outcome.detail;
    if (status == Status::Pass && limit_seconds > 0 && t.seconds >= limit_seconds)
    {
        status = Status::Fail;
        detail += fmt::format("; runtime {:.1f} s exceeds {:.0f} s", t.seconds, limit_seconds);
    }
    const char* tag = status == Status::Pass ? "PASS" : status == Status::Fail ? "FAIL" : "SKIP";
    if (status == Status::Fail)
        ++failures;
    fmt::print("{} [{}] {} ({:.2f} s): {}\n", tag, id, name, t.seconds, detail);
    std::fflush(stdout);
}

// ---------------------------------------------------------------- 1

Outcome teaug_oracle()
{
    CounterRng rng(101, 0);
    std::size_t sets = 0, snapshots = 0, mismatches = 0;
    for (; sets < 1000; ++sets)
    {
        const auto n = 30 + rng.below(271);
        const auto records = testing::random_records(rng, n, "0xt", 2 + rng.below(60));
        const auto delta = 1 + rng.below(std::min<std::uint64_t>(30, n));
        const auto steps = 1 + rng.below(std::min<std::uint64_t>(12, n / delta));
        const auto series = teaug(records, {delta, steps}, "0xt", {}, static_cast<int>(sets % 2));
        // The oracle for the largest snapshot; smaller ones are its prefixes.
        const auto full = testing::brute_force_snapshot(records, "0xt", steps * delta);
        if (series.snapshots.size() != steps)
        {
            ++mismatches;
            continue;
        }
        for (std::size_t k = 1; k <= steps; ++k)
        {
            ++snapshots;
            const auto& g = series.snapshots[k - 1];
            const auto count = k * delta;
            std::size_t used = 1;
            bool ok = g.edges.size() == count && g.label == static_cast<int>(sets % 2);
            for (std::size_t e = 0; ok && e < count; ++e)
            {
                ok = g.edges[e].src == full.edges[e].first && g.edges[e].dst == full.edges[e].second &&
                     g.edges[e].index == full.edge_index[e];
                used = std::max({used, full.edges[e].first + 1, full.edges[e].second + 1});
            }
            ok = ok && g.nodes.size() == used;
            for (std::size_t v = 0; ok && v < used; ++v)
                ok = g.nodes[v].address == full.nodes[v];
            // nesting: snapshot k is a prefix of snapshot k + 1
            if (ok && k < steps)
            {
                const auto& next = series.snapshots[k];
                ok = std::equal(g.edges.begin(), g.edges.end(), next.edges.begin()) &&
                     std::equal(g.nodes.begin(), g.nodes.end(), next.nodes.begin());
            }
            mismatches += !ok;
        }
    }
    return pass_if(mismatches == 0,
        fmt::format("{} record sets, {} snapshots, {} mismatches", sets, snapshots, mismatches));
}

// ---------------------------------------------------------------- 2

Outcome gnn_dense_oracle()
{
    CounterRng rng(202, 0);
    double worst_gcn = 0.0, worst_gat = 0.0;
    for (int trial = 0; trial < 200; ++trial)
    {
        const auto n = 1 + rng.below(20);
        const auto edges = testing::random_edges(n, 0.15, rng);
        const bool sym = rng.bernoulli(0.5);
        const auto topo = nn::Topology::build(n, edges, sym);
        const auto adj = testing::dense_adjacency(n, edges, sym);
        const Matrix x = testing::random_matrix(static_cast<Eigen::Index>(n), 15, rng);

        nn::GcnLayer gcn("gcn", 15, 16, 0.3, rng);
        gcn.bias.value = testing::random_matrix(1, 16, rng, 0.1);
        Tape t;
        const Matrix a = t.value(gcn.forward(t, t.constant(x), topo));
        worst_gcn = std::max(worst_gcn,
            (a - testing::dense_gcn(x, adj, gcn.weight.value, gcn.bias.value)).cwiseAbs().maxCoeff());

        const auto heads = 1 + rng.below(3);
        const bool concat = rng.bernoulli(0.5);
        nn::GatLayer gat("gat", 15, 8, heads, concat, 0.2, 0.3, rng);
        gat.bias.value = testing::random_matrix(1, static_cast<Eigen::Index>(gat.output_dim()), rng, 0.1);
        std::vector<testing::DenseGatHead> dense;
        for (std::size_t h = 0; h < heads; ++h)
            dense.push_back({gat.weight[h].value, gat.att_src[h].value, gat.att_dst[h].value});
        const Matrix b = t.value(gat.forward(t, t.constant(x), topo));
        worst_gat = std::max(worst_gat,
            (b - testing::dense_gat(x, adj, dense, gat.bias.value, concat, 0.2)).cwiseAbs().maxCoeff());
    }
    return pass_if(worst_gcn <= 1e-6 && worst_gat <= 1e-6,
        fmt::format("200 graphs, max abs error GCN {:.2e}, GAT {:.2e} (tolerance 1e-6)", worst_gcn, worst_gat));
}

// ---------------------------------------------------------------- 3

struct GradTally
{
    std::map<std::string, double> worst;
    std::map<std::string, int> instances;

    void add(const std::string& op, const testing::GradCheck& r)
    {
        worst[op] = std::max(worst[op], r.checked == 0 ? 1e9 : r.max_rel_error);
        ++instances[op];
    }
};

ParamTensor rand_param(const char* name, std::size_t rows, std::size_t cols, CounterRng& rng)
{
    return {name, testing::random_matrix(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), rng)};
}

nn::Segments rand_segments(CounterRng& rng)
{
    nn::Segments s;
    const auto count = 1 + rng.below(4);
    for (std::size_t g = 0; g < count; ++g)
        s.offsets.push_back(s.offsets.back() + 1 + rng.below(5));
    return s;
}

LightGraph rand_graph(CounterRng& rng, int label, std::size_t records)
{
    const auto rs = testing::random_records(rng, records, "0xt", 2 + rng.below(4));
    OpcodeHistogram code;
    for (auto& c : code.counts)
    {
        c = rng.below(30);
        code.total += c;
    }
    return merge_multi_edges(build_micro_graph("0xt", rs, code, label));
}

Outcome gradient_checks()
{
    CounterRng rng(303, 0);
    GradTally tally;
    const auto probed = [](std::vector<ParamTensor>& ps, CounterRng& r,
                            const std::function<Var(Tape&, const std::vector<Var>&)>& f) {
        Matrix w;
        return testing::check_gradients(ps, [&](Tape& t, const std::vector<Var>& v) {
            const Var out = f(t, v);
            if (w.size() == 0)
                w = testing::random_matrix(t.value(out).rows(), t.value(out).cols(), r);
            return testing::probe(t, out, w);
        });
    };

    for (int i = 0; i < 20; ++i)
    {
        const auto n = 2 + rng.below(8);
        const auto topo = nn::Topology::build(n, testing::random_edges(n, 0.3, rng), rng.bernoulli(0.5));
        {
            std::vector<ParamTensor> ps{rand_param("a", n, 3, rng), rand_param("b", 3, 4, rng)};
            tally.add("matmul", probed(ps, rng, [](Tape& t, auto& v) { return nn::matmul(t, v[0], v[1]); }));
        }
        {
            std::vector<ParamTensor> ps{rand_param("a", n, 3, rng), rand_param("b", n, 3, rng)};
            tally.add("add", probed(ps, rng, [](Tape& t, auto& v) { return nn::add(t, v[0], v[1]); }));
            tally.add("concat_cols", probed(ps, rng, [](Tape& t, auto& v) { return nn::concat_cols(t, v[0], v[1]); }));
        }
        {
            std::vector<ParamTensor> ps{rand_param("a", n, 3, rng), rand_param("r", 1, 3, rng)};
            tally.add("add_row", probed(ps, rng, [](Tape& t, auto& v) { return nn::add_row(t, v[0], v[1]); }));
        }
        {
            std::vector<ParamTensor> ps{rand_param("x", n, 4, rng)};
            tally.add("scale", probed(ps, rng, [](Tape& t, auto& v) { return nn::scale(t, v[0], -2.5); }));
            tally.add("relu", probed(ps, rng, [](Tape& t, auto& v) { return nn::relu(t, v[0]); }));
            tally.add("leaky_relu", probed(ps, rng, [](Tape& t, auto& v) { return nn::leaky_relu(t, v[0], 0.2); }));
            tally.add("dropout", probed(ps, rng, [](Tape& t, auto& v) {
                CounterRng mask(7, 1);
                return nn::dropout(t, v[0], 0.1, mask);
            }));
            tally.add("log_softmax_rows",
                probed(ps, rng, [](Tape& t, auto& v) { return nn::log_softmax_rows(t, v[0]); }));
            tally.add("gcn_propagate",
                probed(ps, rng, [&](Tape& t, auto& v) { return nn::gcn_propagate(t, v[0], topo); }));
        }
        {
            std::vector<int> labels(n);
            for (auto& y : labels)
                y = static_cast<int>(rng.below(2));
            std::vector<ParamTensor> ps{rand_param("logits", n, 2, rng)};
            tally.add("nll_loss", testing::check_gradients(ps, [&](Tape& t, const std::vector<Var>& v) {
                return nn::nll_loss(t, nn::log_softmax_rows(t, v[0]), labels);
            }));
        }
        {
            std::vector<ParamTensor> ps{rand_param("h", n, 3, rng), rand_param("s", n, 1, rng), rand_param("d", n, 1, rng)};
            tally.add("gat_aggregate", probed(ps, rng, [&](Tape& t, auto& v) {
                return nn::gat_aggregate(t, v[0], v[1], v[2], topo, 0.2);
            }));
        }
        {
            const auto seg = rand_segments(rng);
            const auto rows = seg.offsets.back();
            std::vector<ParamTensor> ps{rand_param("h", rows, 3, rng)};
            for (const auto mode : {nn::PoolMode::Max, nn::PoolMode::Mean, nn::PoolMode::Sum})
                tally.add(fmt::format("segment_pool[{}]", nn::to_string(mode)),
                    probed(ps, rng, [&](Tape& t, auto& v) { return nn::segment_pool(t, v[0], seg, mode); }));
            std::vector<ParamTensor> scores{rand_param("s", rows, 1, rng)};
            tally.add("segment_softmax",
                probed(scores, rng, [&](Tape& t, auto& v) { return nn::segment_softmax(t, v[0], seg); }));
            std::vector<ParamTensor> ws{rand_param("w", rows, 1, rng), rand_param("h", rows, 3, rng)};
            tally.add("segment_weighted_sum", probed(ws, rng, [&](Tape& t, auto& v) {
                return nn::segment_weighted_sum(t, v[0], v[1], seg);
            }));
        }
        {
            // the layers, through their own parameter bindings
            const Matrix x = testing::random_matrix(static_cast<Eigen::Index>(n), 5, rng);
            nn::GcnLayer gcn("gcn", 5, 4, 0.5, rng);
            gcn.bias.value = testing::random_matrix(1, 4, rng, 0.3);
            const Matrix wg = testing::random_matrix(static_cast<Eigen::Index>(n), 4, rng);
            tally.add("GcnLayer", testing::check_bound_gradients(gcn.parameters(), [&](Tape& t) {
                return testing::probe(t, gcn.forward(t, t.constant(x), topo), wg);
            }));
            nn::GatLayer gat("gat", 5, 3, 2, rng.bernoulli(0.5), 0.2, 0.5, rng);
            gat.bias.value = testing::random_matrix(1, static_cast<Eigen::Index>(gat.output_dim()), rng, 0.3);
            const Matrix wa = testing::random_matrix(
                static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(gat.output_dim()), rng);
            tally.add("GatLayer", testing::check_bound_gradients(gat.parameters(), [&](Tape& t) {
                return testing::probe(t, gat.forward(t, t.constant(x), topo), wa);
            }));
            nn::Segments one;
            one.offsets = {0, n};
            nn::GlobalAttentionPool pool("pool", 5, 0.5, rng);
            const Matrix wp = testing::random_matrix(1, 5, rng);
            tally.add("GlobalAttentionPool", testing::check_bound_gradients(pool.parameters(), [&](Tape& t) {
                return testing::probe(t, pool.forward(t, t.constant(x), one), wp);
            }));
            std::vector<nn::DenseLayer> mlp{{nn::Linear("l0", 5, 6, 0.5, rng), nn::Activation::Relu},
                {nn::Linear("l1", 6, 2, 0.5, rng), nn::Activation::Identity}};
            std::vector<ParamTensor*> mp;
            for (auto& l : mlp)
                for (auto* p : l.linear.parameters())
                    mp.push_back(p);
            const Matrix wm = testing::random_matrix(static_cast<Eigen::Index>(n), 2, rng);
            tally.add("mlp_forward", testing::check_bound_gradients(mp, [&](Tape& t) {
                return testing::probe(t, nn::mlp_forward(t, t.constant(x), mlp, nn::ForwardContext{}), wm);
            }));
        }
        {
            // full dual-channel forward pass and loss
            DualChannelConfig cfg;
            cfg.hidden_dim = 16;
            cfg.seed = static_cast<std::uint64_t>(i);
            cfg.backbone = i % 2 == 0 ? Backbone::Gcn : Backbone::Gat;
            const nn::PoolMode pools[] = {nn::PoolMode::Max, nn::PoolMode::Mean, nn::PoolMode::Sum,
                nn::PoolMode::GlobalAttention};
            cfg.pooling = pools[(i / 2) % 4];
            DualChannelModel model(cfg);
            const std::vector<LightGraph> graphs{rand_graph(rng, 1, 6), rand_graph(rng, 0, 8)};
            model.scaler = FeatureScaler::fit(graphs);
            const auto batch = make_batch(graphs, model.scaler, cfg.symmetrize);
            tally.add("DualChannelModel", testing::check_bound_gradients(model.parameters(), [&](Tape& t) {
                return nn::nll_loss(t, model.forward(t, batch, Mode::Eval), batch.labels);
            }));
        }
    }

    double worst = 0.0;
    std::string worst_op;
    int min_instances = 1 << 30;
    for (const auto& [op, err] : tally.worst)
    {
        if (err > worst)
        {
            worst = err;
            worst_op = op;
        }
        min_instances = std::min(min_instances, tally.instances[op]);
    }
    return pass_if(worst < 1e-4 && min_instances >= 20,
        fmt::format("{} ops x >= {} instances, max relative error {:.2e} ({}), tolerance 1e-4",
            tally.worst.size(), min_instances, worst, worst_op));
}

// ---------------------------------------------------------------- 4, 6

ExperimentConfig synthetic_config(const fs::path& dir)
{
    ExperimentConfig c;
    c.data = ExperimentConfig::DataKind::Synthetic;
    c.synth_ponzi = 75;
    c.synth_normal = 325;
    c.synth_seed = 0;
    c.teaug = {10, 10};
    c.split = {256, 64, 80, 0};
    c.model.hidden_dim = 64;
    c.model.backbone = Backbone::Gcn;
    c.methods = {"code-only", "trans-only", "dual"};
    c.repeats = 5;
    c.output_dir = dir;
    c.save_checkpoints = false;
    return c;
}

std::string join(const std::vector<double>& v)
{
    std::string s;
    for (const auto x : v)
        s += fmt::format("{}{:.3f}", s.empty() ? "" : " ", x);
    return s;
}

Outcome synthetic_end_to_end(const fs::path& dir)
{
    const auto r = run_experiment(synthetic_config(dir));
    std::map<std::string, std::vector<double>> mean;
    for (const auto& rep : r.reports)
        mean[rep.method] = rep.mean();
    const auto& dual = mean.at("dual");
    const auto& code = mean.at("code-only");
    const auto& trans = mean.at("trans-only");
    bool dominates = true;
    double margin = 1.0;
    for (std::size_t k = 0; k < dual.size(); ++k)
    {
        const double best_single = std::max(code[k], trans[k]);
        margin = std::min(margin, dual[k] - best_single);
        dominates = dominates && dual[k] >= best_single - 0.02;
    }
    const double f1_10 = dual.back();
    return pass_if(f1_10 >= 0.95 && dominates,
        fmt::format("dual F1 at scale 10 = {:.4f} (>= 0.95); min(dual - best single) = {:+.4f} (>= -0.02); "
                    "mean over 5 runs: dual [{}] trans-only [{}] code-only [{}]",
            f1_10, margin, join(dual), join(trans), join(code)));
}

std::string read_file(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism(const fs::path& root)
{
    auto c = synthetic_config(root / "a");
    c.methods = {"dual"};
    c.repeats = 1;
    run_experiment(c);
    c.output_dir = root / "b";
    run_experiment(c);
    const auto a = read_file(root / "a" / "metrics.csv");
    const auto b = read_file(root / "b" / "metrics.csv");
    return pass_if(!a.empty() && a == b,
        fmt::format("two runs of the same config: metrics.csv {} ({} bytes)", a == b ? "byte-identical" : "differs",
            a.size()));
}

// ---------------------------------------------------------------- 5

const std::vector<double> kReferenceCurve = {0.9054, 0.9077, 0.9077, 0.9100, 0.9100, 0.9100, 0.9124, 0.9171, 0.9171, 0.9171};

Outcome threshold_fixture()
{
    const auto t = threshold_report(kReferenceCurve, 10, 0.005);
    return pass_if(t.scale == 7 && t.transactions == 70,
        fmt::format("scale {} -> {} transactions (expected 7 -> 70)", t.scale, t.transactions));
}

// ---------------------------------------------------------------- 7

Outcome real_data(const char* root_env)
{
    if (root_env == nullptr)
        return {Status::Skip, "set PONZI_ETH_PONZI_DIR to a directory with tx/, bytecode/ and labels.csv"};
    const fs::path root(root_env);
    const auto ds = load_dataset(root / "tx", root / "bytecode", root / "labels.csv", {100});
    const auto stats = scale_statistics(ds.accounts, {10, 10}, &ds.contracts);
    const double nodes[] = {6.76, 11.08, 15.12, 19.11, 23.09, 27.01, 30.89, 34.72, 38.45, 42.12};
    const double edges[] = {6.52, 11.35, 15.89, 20.34, 24.74, 29.13, 33.50, 37.76, 41.91, 46.06};
    double worst_stat = 0.0;
    for (std::size_t k = 0; k < 10; ++k)
    {
        worst_stat = std::max(worst_stat, std::abs(stats[k].avg_nodes - nodes[k]) / nodes[k]);
        worst_stat = std::max(worst_stat, std::abs(stats[k].avg_edges - edges[k]) / edges[k]);
    }

    auto c = synthetic_config(fs::temp_directory_path() / "ponzi_acceptance_real");
    c.data = ExperimentConfig::DataKind::Files;
    c.tx_dir = root / "tx";
    c.bytecode_dir = root / "bytecode";
    c.labels_file = root / "labels.csv";
    c.methods = {"dual"};
    const auto f1 = run_experiment(c).reports.front().mean();
    double worst_f1 = 0.0;
    for (std::size_t k = 0; k < 10; ++k)
        worst_f1 = std::max(worst_f1, std::abs(f1[k] - kReferenceCurve[k]));
    return pass_if(worst_stat <= 0.05 && worst_f1 <= 0.05,
        fmt::format("{} accounts ({} ponzi); scale stats max relative deviation {:.3f} (<= 0.05); "
                    "F1 [{}] max deviation {:.4f} (<= 0.05)",
            ds.accounts.size(), ds.positives(), worst_stat, join(f1), worst_f1));
}

// ---------------------------------------------------------------- 8

struct ListingLine
{
    std::size_t offset = 0;
    std::string mnemonic;
    std::string immediate;
};

std::vector<ListingLine> read_listing(const fs::path& p)
{
    std::vector<ListingLine> out;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        ListingLine l;
        ls >> l.offset >> l.mnemonic >> l.immediate;
        out.push_back(l);
    }
    return out;
}

std::string family(const std::string& mnemonic)
{
    for (const char* f : {"PUSH", "DUP", "SWAP", "LOG"})
        if (mnemonic.rfind(f, 0) == 0)
            return f;
    return mnemonic;
}

Outcome disassembler_fixtures()
{
    const fs::path dir = fs::path(PONZI_FIXTURES) / "bytecode";
    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".hex")
            names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    if (names.empty())
        return {Status::Fail, "no fixtures in " + dir.string()};

    std::size_t instructions = 0, problems = 0;
    std::string first_problem;
    const auto problem = [&](const std::string& what) {
        if (problems++ == 0)
            first_problem = what;
    };
    const auto push = category_index("PUSH");
    for (const auto& name : names)
    {
        const auto code = load_bytecode_file(dir / (name + ".hex"));
        const auto listing = read_listing(dir / (name + ".listing"));
        const auto ops = disassemble(code);
        instructions += listing.size();
        if (ops.size() != listing.size())
            problem(fmt::format("{}: {} instructions, listing has {}", name, ops.size(), listing.size()));
        for (std::size_t i = 0; i < std::min(ops.size(), listing.size()); ++i)
            if (mnemonic(static_cast<std::uint8_t>(ops[i])) != listing[i].mnemonic)
                problem(fmt::format("{}: instruction {} is {}, listing says {}", name, i,
                    mnemonic(static_cast<std::uint8_t>(ops[i])), listing[i].mnemonic));

        std::map<std::string, std::uint64_t> expected;
        for (const auto& l : listing)
            ++expected[family(l.mnemonic)];
        const auto h = code_features(code);
        std::uint64_t listed = 0;
        for (const auto& [cat, n] : expected)
        {
            listed += n;
            if (h[category_index(cat)] != n)
                problem(fmt::format("{}: {} counted {}, listing has {}", name, cat, h[category_index(cat)], n));
        }
        if (h.total != listing.size() || listed != h.total)
            problem(fmt::format("{}: total {} vs listing {}", name, h.total, listing.size()));

        // Bytes inside PUSH immediates never count: overwrite each immediate
        // with opcode-looking bytes and the histogram must not move.
        auto scrambled = code;
        for (const auto& l : listing)
            if (family(l.mnemonic) == "PUSH" && l.mnemonic != "PUSH0")
            {
                const auto width = static_cast<std::size_t>(std::stoi(l.mnemonic.substr(4)));
                for (std::size_t b = 0; b < width && l.offset + 1 + b < scrambled.size(); ++b)
                    scrambled[l.offset + 1 + b] = static_cast<std::uint8_t>(0x5b + (b % 0x20));
            }
        if (!(code_features(scrambled) == h))
            problem(name + ": histogram depends on PUSH immediate bytes");
        if (h[push] == 0)
            problem(name + ": fixture has no PUSH");
    }
    return pass_if(problems == 0,
        fmt::format("{} fixtures, {} listed instructions, {} mismatches{}", names.size(), instructions, problems,
            problems ? " (first: " + first_problem + ")" : ""));
}
}  // namespace

int main()
{
#if defined(__GLIBC__)
    mallopt(M_MMAP_THRESHOLD, 1 << 30);
    mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
    const auto work = fs::temp_directory_path() / "ponzi_acceptance";
    fs::remove_all(work);

    report(1, "TEAug oracle equivalence", timed(teaug_oracle), 10);
    report(2, "GNN edge-list vs dense oracle", timed(gnn_dense_oracle), 10);
    report(3, "gradient checks", timed(gradient_checks), 60);
    const auto c4 = timed([&] { return synthetic_end_to_end(work / "synthetic"); });
    report(4, "synthetic end-to-end", c4, 300);
    report(5, "threshold analysis on the reference F1 curve", timed(threshold_fixture), 1);
    const auto c6 = timed([&] { return determinism(work / "determinism"); });
    report(6, "run determinism", c6, 2 * c4.seconds);
    report(7, "real-data reproduction", timed([] { return real_data(std::getenv("PONZI_ETH_PONZI_DIR")); }), 0);
    report(8, "disassembler conformance", timed(disassembler_fixtures), 5);

    fmt::print("{} criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
