// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/nn/checkpoint.hpp"

#include "ponzi/error.hpp"

#include <map>
#include <string>

namespace ponzi::nn
{
nlohmann::json tensors_to_json(std::span<const ParamTensor* const> params)
{
    nlohmann::json tensors = nlohmann::json::array();
    for (const auto* p : params)
    {
        std::vector<double> data;
        data.reserve(static_cast<std::size_t>(p->value.size()));
        for (Eigen::Index i = 0; i < p->value.rows(); ++i)
            for (Eigen::Index j = 0; j < p->value.cols(); ++j)
                data.push_back(p->value(i, j));
        tensors.push_back({{"name", p->name}, {"rows", p->value.rows()}, {"cols", p->value.cols()},
            {"data", std::move(data)}});
    }
    return {{"version", kCheckpointVersion}, {"tensors", std::move(tensors)}};
}

void tensors_from_json(const nlohmann::json& j, std::span<ParamTensor* const> params)
{
    if (j.value("version", 0) != kCheckpointVersion)
        throw Error("unsupported checkpoint version");
    std::map<std::string, const nlohmann::json*> stored;
    for (const auto& t : j.at("tensors"))
        stored[t.at("name").get<std::string>()] = &t;
    if (stored.size() != params.size())
        throw ShapeError("checkpoint holds " + std::to_string(stored.size()) + " tensors, model has " +
                         std::to_string(params.size()));
    for (auto* p : params)
    {
        const auto it = stored.find(p->name);
        if (it == stored.end())
            throw ShapeError("checkpoint has no tensor '" + p->name + "'");
        const auto& t = *it->second;
        const auto rows = t.at("rows").get<Eigen::Index>();
        const auto cols = t.at("cols").get<Eigen::Index>();
        if (rows != p->value.rows() || cols != p->value.cols())
            throw ShapeError("tensor '" + p->name + "' is " + std::to_string(rows) + "x" + std::to_string(cols) +
                             " in the checkpoint, model expects " + std::to_string(p->value.rows()) + "x" +
                             std::to_string(p->value.cols()));
        const auto& data = t.at("data");
        if (static_cast<Eigen::Index>(data.size()) != rows * cols)
            throw ShapeError("tensor '" + p->name + "' has the wrong number of values");
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < rows; ++r)
            for (Eigen::Index c = 0; c < cols; ++c)
                p->value(r, c) = data[k++].get<double>();
        p->zero_grad();
    }
}
}  // namespace ponzi::nn
