// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/nn/ops.hpp"

#include "ponzi/error.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

namespace ponzi::nn
{
namespace
{
using Index = Eigen::Index;

Index idx(std::size_t i) noexcept
{
    return static_cast<Index>(i);
}

std::string dims(const Matrix& m)
{
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void require_same_shape(const Matrix& a, const Matrix& b, std::string_view op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string{op} + ": shape mismatch " + dims(a) + " vs " + dims(b));
}

void require_segments(const Matrix& h, const Segments& segments, std::string_view op)
{
    if (segments.offsets.empty() || segments.offsets.front() != 0 ||
        segments.offsets.back() != static_cast<std::size_t>(h.rows()))
        throw ShapeError(std::string{op} + ": segments do not cover " + std::to_string(h.rows()) + " rows");
    for (std::size_t g = 0; g < segments.count(); ++g)
        if (segments.offsets[g + 1] <= segments.offsets[g])
            throw Error(std::string{op} + ": graph " + std::to_string(g) + " has no nodes");
}

void require_topology(const Matrix& x, const Topology& topo, std::string_view op)
{
    if (topo.num_nodes == 0)
        throw ShapeError(std::string{op} + ": empty graph");
    if (static_cast<std::size_t>(x.rows()) != topo.num_nodes)
        throw ShapeError(std::string{op} + ": " + std::to_string(x.rows()) + " feature rows for " +
                         std::to_string(topo.num_nodes) + " nodes");
}
}  // namespace

Topology Topology::build(std::size_t num_nodes,
    std::span<const std::pair<std::size_t, std::size_t>> edges, bool symmetrize)
{
    std::vector<std::vector<std::size_t>> incoming(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i)
        incoming[i].push_back(i);
    for (const auto& [src, dst] : edges)
    {
        if (src >= num_nodes || dst >= num_nodes)
            throw ShapeError("edge endpoint outside the graph");
        if (src == dst)
            continue;
        incoming[dst].push_back(src);
        if (symmetrize)
            incoming[src].push_back(dst);
    }
    Topology topo;
    topo.num_nodes = num_nodes;
    topo.offsets.reserve(num_nodes + 1);
    for (auto& list : incoming)
    {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        topo.neighbors.insert(topo.neighbors.end(), list.begin(), list.end());
        topo.offsets.push_back(topo.neighbors.size());
    }
    return topo;
}

std::string_view to_string(PoolMode mode) noexcept
{
    switch (mode)
    {
    case PoolMode::Max:
        return "max";
    case PoolMode::Mean:
        return "mean";
    case PoolMode::Sum:
        return "sum";
    case PoolMode::GlobalAttention:
        return "global_attention";
    }
    return "unknown";
}

PoolMode pool_mode_from_string(std::string_view name)
{
    for (const auto mode : {PoolMode::Max, PoolMode::Mean, PoolMode::Sum, PoolMode::GlobalAttention})
        if (to_string(mode) == name)
            return mode;
    throw Error("unknown pooling mode '" + std::string{name} + "'");
}

Var matmul(Tape& t, Var a, Var b)
{
    const auto& va = t.value(a);
    const auto& vb = t.value(b);
    if (va.cols() != vb.rows())
        throw ShapeError("matmul: " + dims(va) + " * " + dims(vb));
    return t.record("matmul", va * vb, [a, b](Tape& tape, const Matrix& g) {
        if (tape.requires_grad(a))
            tape.accumulate(a, g * tape.value(b).transpose());
        if (tape.requires_grad(b))
            tape.accumulate(b, tape.value(a).transpose() * g);
    });
}

Var add(Tape& t, Var a, Var b)
{
    require_same_shape(t.value(a), t.value(b), "add");
    return t.record("add", t.value(a) + t.value(b), [a, b](Tape& tape, const Matrix& g) {
        tape.accumulate(a, g);
        tape.accumulate(b, g);
    });
}

Var add_row(Tape& t, Var a, Var row)
{
    const auto& va = t.value(a);
    const auto& vr = t.value(row);
    if (vr.rows() != 1 || vr.cols() != va.cols())
        throw ShapeError("add_row: " + dims(va) + " + " + dims(vr));
    Matrix out = va.rowwise() + vr.row(0);
    return t.record("add_row", std::move(out), [a, row](Tape& tape, const Matrix& g) {
        tape.accumulate(a, g);
        tape.accumulate(row, g.colwise().sum());
    });
}

Var scale(Tape& t, Var a, double factor)
{
    return t.record("scale", t.value(a) * factor,
        [a, factor](Tape& tape, const Matrix& g) { tape.accumulate(a, g * factor); });
}

Var relu(Tape& t, Var a)
{
    return t.record("relu", t.value(a).cwiseMax(0.0), [a](Tape& tape, const Matrix& g) {
        const auto& x = tape.value(a);
        tape.accumulate(a, (x.array() > 0.0).select(g, 0.0));
    });
}

Var leaky_relu(Tape& t, Var a, double slope)
{
    const auto& x = t.value(a);
    Matrix out = (x.array() > 0.0).select(x, slope * x);
    return t.record("leaky_relu", std::move(out), [a, slope](Tape& tape, const Matrix& g) {
        const auto& x = tape.value(a);
        tape.accumulate(a, (x.array() > 0.0).select(g, slope * g));
    });
}

Var dropout(Tape& t, Var a, double rate, CounterRng& rng)
{
    if (rate < 0.0 || rate >= 1.0)
        throw Error("dropout rate must be in [0, 1)");
    const auto& x = t.value(a);
    Matrix mask(x.rows(), x.cols());
    const double keep = 1.0 / (1.0 - rate);
    for (Index j = 0; j < mask.cols(); ++j)
        for (Index i = 0; i < mask.rows(); ++i)
            mask(i, j) = rng.uniform() < rate ? 0.0 : keep;
    Matrix out = x.cwiseProduct(mask);
    return t.record("dropout", std::move(out),
        [a, mask = std::move(mask)](Tape& tape, const Matrix& g) { tape.accumulate(a, g.cwiseProduct(mask)); });
}

Var concat_cols(Tape& t, Var a, Var b)
{
    const auto& va = t.value(a);
    const auto& vb = t.value(b);
    if (va.rows() != vb.rows())
        throw ShapeError("concat_cols: " + dims(va) + " | " + dims(vb));
    Matrix out(va.rows(), va.cols() + vb.cols());
    out << va, vb;
    const Index left = va.cols();
    const Index right = vb.cols();
    return t.record("concat_cols", std::move(out), [a, b, left, right](Tape& tape, const Matrix& g) {
        tape.accumulate(a, g.leftCols(left));
        tape.accumulate(b, g.rightCols(right));
    });
}

Var log_softmax_rows(Tape& t, Var a)
{
    const auto& x = t.value(a);
    const Eigen::VectorXd row_max = x.rowwise().maxCoeff();
    Matrix shifted = x.colwise() - row_max;
    const Eigen::VectorXd lse = shifted.array().exp().rowwise().sum().log().matrix();
    Matrix out = shifted.colwise() - lse;
    return t.record("log_softmax", out, [a, out](Tape& tape, const Matrix& g) {
        const Matrix softmax = out.array().exp().matrix();
        const Eigen::VectorXd total = g.rowwise().sum();
        Matrix dx = g - (softmax.array().colwise() * total.array()).matrix();
        tape.accumulate(a, dx);
    });
}

Var nll_loss(Tape& t, Var log_probs, std::span<const int> labels, std::span<const double> class_weights)
{
    const auto& lp = t.value(log_probs);
    if (static_cast<std::size_t>(lp.rows()) != labels.size() || lp.rows() == 0)
        throw ShapeError("nll_loss: " + std::to_string(lp.rows()) + " rows for " +
                         std::to_string(labels.size()) + " labels");
    for (Index i = 0; i < lp.rows(); ++i)
    {
        const double m = lp.row(i).maxCoeff();
        const double lse = m + std::log((lp.row(i).array() - m).exp().sum());
        if (std::abs(lse) > 1e-9)
            throw Error("nll_loss: row " + std::to_string(i) + " is not a log-probability distribution");
    }
    std::vector<double> weight(labels.size(), 1.0);
    double total_weight = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
    {
        const int y = labels[i];
        if (y < 0 || y >= lp.cols())
            throw Error("nll_loss: label " + std::to_string(y) + " out of range");
        if (!class_weights.empty())
            weight[i] = class_weights[static_cast<std::size_t>(y)];
        total_weight += weight[i];
        loss -= weight[i] * lp(idx(i), y);
    }
    loss /= total_weight;
    std::vector<int> ys(labels.begin(), labels.end());
    return t.record("nll_loss", Matrix::Constant(1, 1, loss),
        [log_probs, ys = std::move(ys), weight = std::move(weight), total_weight](Tape& tape, const Matrix& g) {
            const auto& lp = tape.value(log_probs);
            Matrix d = Matrix::Zero(lp.rows(), lp.cols());
            for (std::size_t i = 0; i < ys.size(); ++i)
                d(idx(i), ys[i]) = -g(0, 0) * weight[i] / total_weight;
            tape.accumulate(log_probs, d);
        });
}

Var gcn_propagate(Tape& t, Var x, const Topology& topo)
{
    const auto& v = t.value(x);
    require_topology(v, topo, "gcn_propagate");
    std::vector<double> inv_sqrt(topo.num_nodes);
    for (std::size_t i = 0; i < topo.num_nodes; ++i)
        inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(topo.degree(i)));

    // Row i of the normalized adjacency holds the neighbourhood of i.
    using Sparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(topo.neighbors.size());
    for (std::size_t i = 0; i < topo.num_nodes; ++i)
        for (const auto j : topo.neighborhood(i))
            entries.emplace_back(idx(i), idx(j), inv_sqrt[i] * inv_sqrt[j]);
    auto adj = std::make_shared<Sparse>(idx(topo.num_nodes), idx(topo.num_nodes));
    adj->setFromTriplets(entries.begin(), entries.end());

    Matrix out = *adj * v;
    return t.record("gcn_propagate", std::move(out), [x, adj](Tape& tape, const Matrix& g) {
        if (tape.requires_grad(x))
            tape.accumulate(x, adj->transpose() * g);
    });
}

Var gat_aggregate(Tape& t, Var features, Var src_score, Var dst_score, const Topology& topo, double slope)
{
    const auto& h = t.value(features);
    const auto& ss = t.value(src_score);
    const auto& sd = t.value(dst_score);
    require_topology(h, topo, "gat_aggregate");
    if (ss.rows() != h.rows() || ss.cols() != 1 || sd.rows() != h.rows() || sd.cols() != 1)
        throw ShapeError("gat_aggregate: scores must be " + std::to_string(h.rows()) + "x1");

    // alpha[k] is the attention of neighbors[k] within its neighbourhood;
    // positive[k] records the LeakyReLU branch of the raw score.
    std::vector<double> alpha(topo.neighbors.size());
    std::vector<char> positive(topo.neighbors.size());
    Matrix out = Matrix::Zero(h.rows(), h.cols());
    for (std::size_t i = 0; i < topo.num_nodes; ++i)
    {
        double max_e = -std::numeric_limits<double>::infinity();
        for (std::size_t k = topo.offsets[i]; k < topo.offsets[i + 1]; ++k)
        {
            const double raw = sd(idx(i), 0) + ss(idx(topo.neighbors[k]), 0);
            positive[k] = raw > 0.0;
            alpha[k] = raw > 0.0 ? raw : slope * raw;
            max_e = std::max(max_e, alpha[k]);
        }
        double denom = 0.0;
        for (std::size_t k = topo.offsets[i]; k < topo.offsets[i + 1]; ++k)
        {
            alpha[k] = std::exp(alpha[k] - max_e);
            denom += alpha[k];
        }
        for (std::size_t k = topo.offsets[i]; k < topo.offsets[i + 1]; ++k)
        {
            alpha[k] /= denom;
            out.row(idx(i)) += alpha[k] * h.row(idx(topo.neighbors[k]));
        }
    }

    return t.record("gat_aggregate", std::move(out),
        [features, src_score, dst_score, &topo, slope, alpha = std::move(alpha),
            positive = std::move(positive)](Tape& tape, const Matrix& g) {
            const auto& h = tape.value(features);
            Matrix dh = Matrix::Zero(h.rows(), h.cols());
            Matrix dss = Matrix::Zero(h.rows(), 1);
            Matrix dsd = Matrix::Zero(h.rows(), 1);
            std::vector<double> dalpha;
            for (std::size_t i = 0; i < topo.num_nodes; ++i)
            {
                const auto begin = topo.offsets[i];
                const auto end = topo.offsets[i + 1];
                dalpha.assign(end - begin, 0.0);
                double weighted = 0.0;
                for (std::size_t k = begin; k < end; ++k)
                {
                    const auto j = topo.neighbors[k];
                    dalpha[k - begin] = g.row(idx(i)).dot(h.row(idx(j)));
                    weighted += alpha[k] * dalpha[k - begin];
                    dh.row(idx(j)) += alpha[k] * g.row(idx(i));
                }
                for (std::size_t k = begin; k < end; ++k)
                {
                    const double de = alpha[k] * (dalpha[k - begin] - weighted);
                    const double draw = positive[k] ? de : slope * de;
                    dsd(idx(i), 0) += draw;
                    dss(idx(topo.neighbors[k]), 0) += draw;
                }
            }
            tape.accumulate(features, dh);
            tape.accumulate(src_score, dss);
            tape.accumulate(dst_score, dsd);
        });
}

Var segment_pool(Tape& t, Var h, const Segments& segments, PoolMode mode)
{
    const auto& v = t.value(h);
    require_segments(v, segments, "segment_pool");
    const auto graphs = segments.count();
    Matrix out(idx(graphs), v.cols());

    if (mode == PoolMode::Max)
    {
        // winner(g, c) is the row that supplied the maximum
        Eigen::Matrix<Index, Eigen::Dynamic, Eigen::Dynamic> winner(idx(graphs), v.cols());
        for (std::size_t g = 0; g < graphs; ++g)
        {
            const auto begin = idx(segments.offsets[g]);
            const auto rows = idx(segments.offsets[g + 1]) - begin;
            for (Index c = 0; c < v.cols(); ++c)
            {
                Index best = 0;
                out(idx(g), c) = v.col(c).segment(begin, rows).maxCoeff(&best);
                winner(idx(g), c) = begin + best;
            }
        }
        return t.record("max_pool", std::move(out), [h, winner](Tape& tape, const Matrix& g) {
            const auto& v = tape.value(h);
            Matrix dh = Matrix::Zero(v.rows(), v.cols());
            for (Index r = 0; r < winner.rows(); ++r)
                for (Index c = 0; c < winner.cols(); ++c)
                    dh(winner(r, c), c) += g(r, c);
            tape.accumulate(h, dh);
        });
    }
    if (mode != PoolMode::Mean && mode != PoolMode::Sum)
        throw Error("segment_pool handles max, mean and sum; attention pooling is a layer");

    const bool mean = mode == PoolMode::Mean;
    for (std::size_t g = 0; g < graphs; ++g)
    {
        const auto begin = idx(segments.offsets[g]);
        const auto rows = idx(segments.offsets[g + 1]) - begin;
        out.row(idx(g)) = v.middleRows(begin, rows).colwise().sum();
        if (mean)
            out.row(idx(g)) /= static_cast<double>(rows);
    }
    return t.record(mean ? "mean_pool" : "sum_pool", std::move(out),
        [h, &segments, mean](Tape& tape, const Matrix& g) {
            const auto& v = tape.value(h);
            Matrix dh(v.rows(), v.cols());
            for (std::size_t s = 0; s < segments.count(); ++s)
            {
                const auto begin = idx(segments.offsets[s]);
                const auto rows = idx(segments.offsets[s + 1]) - begin;
                const double f = mean ? 1.0 / static_cast<double>(rows) : 1.0;
                for (Index r = begin; r < begin + rows; ++r)
                    dh.row(r) = f * g.row(idx(s));
            }
            tape.accumulate(h, dh);
        });
}

Var segment_softmax(Tape& t, Var scores, const Segments& segments)
{
    const auto& s = t.value(scores);
    if (s.cols() != 1)
        throw ShapeError("segment_softmax: scores must be a column, got " + dims(s));
    require_segments(s, segments, "segment_softmax");
    Matrix out(s.rows(), 1);
    for (std::size_t g = 0; g < segments.count(); ++g)
    {
        const auto begin = idx(segments.offsets[g]);
        const auto rows = idx(segments.offsets[g + 1]) - begin;
        const auto seg = s.col(0).segment(begin, rows);
        const Eigen::VectorXd e = (seg.array() - seg.maxCoeff()).exp().matrix();
        out.col(0).segment(begin, rows) = e / e.sum();
    }
    return t.record("segment_softmax", out, [scores, &segments, out](Tape& tape, const Matrix& g) {
        Matrix ds(out.rows(), 1);
        for (std::size_t s = 0; s < segments.count(); ++s)
        {
            const auto begin = idx(segments.offsets[s]);
            const auto rows = idx(segments.offsets[s + 1]) - begin;
            const auto p = out.col(0).segment(begin, rows);
            const auto dg = g.col(0).segment(begin, rows);
            const double inner = p.dot(dg);
            ds.col(0).segment(begin, rows) = p.cwiseProduct((dg.array() - inner).matrix());
        }
        tape.accumulate(scores, ds);
    });
}

Var segment_weighted_sum(Tape& t, Var weights, Var h, const Segments& segments)
{
    const auto& w = t.value(weights);
    const auto& v = t.value(h);
    if (w.cols() != 1 || w.rows() != v.rows())
        throw ShapeError("segment_weighted_sum: weights " + dims(w) + " for features " + dims(v));
    require_segments(v, segments, "segment_weighted_sum");
    Matrix out(idx(segments.count()), v.cols());
    for (std::size_t g = 0; g < segments.count(); ++g)
    {
        const auto begin = idx(segments.offsets[g]);
        const auto rows = idx(segments.offsets[g + 1]) - begin;
        out.row(idx(g)) = w.col(0).segment(begin, rows).transpose() * v.middleRows(begin, rows);
    }
    return t.record("segment_weighted_sum", std::move(out),
        [weights, h, &segments](Tape& tape, const Matrix& g) {
            const auto& w = tape.value(weights);
            const auto& v = tape.value(h);
            Matrix dw(w.rows(), 1);
            Matrix dh(v.rows(), v.cols());
            for (std::size_t s = 0; s < segments.count(); ++s)
            {
                const auto begin = idx(segments.offsets[s]);
                const auto rows = idx(segments.offsets[s + 1]) - begin;
                dw.col(0).segment(begin, rows) = v.middleRows(begin, rows) * g.row(idx(s)).transpose();
                dh.middleRows(begin, rows) = w.col(0).segment(begin, rows) * g.row(idx(s));
            }
            tape.accumulate(weights, dw);
            tape.accumulate(h, dh);
        });
}
}  // namespace ponzi::nn
