// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/error.hpp"
#include "ponzi/nn/adam.hpp"
#include "ponzi/nn/checkpoint.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace ponzi;
using namespace ponzi::nn;

TEST_CASE("first step, hand computed")
{
    ParamTensor p("p", Matrix::Constant(1, 1, 0.5));
    Adam adam({&p}, {0.01, 0.9, 0.999, 1e-8, 0.0});
    p.grad(0, 0) = 1.0;
    adam.step();
    // m = 0.1, v = 0.001; m_hat = 1, v_hat = 1
    CHECK(p.value(0, 0) == doctest::Approx(0.5 - 0.01 / (1.0 + 1e-8)).epsilon(1e-14));
    CHECK(adam.step_count() == 1);
    CHECK(adam.first_moments()[0](0, 0) == doctest::Approx(0.1));
    CHECK(adam.second_moments()[0](0, 0) == doctest::Approx(0.001));

    // second step with grad -2: m = 0.09 - 0.2 = -0.11, v = 0.000999 + 0.004 = 0.004999
    p.grad(0, 0) = -2.0;
    const double before = p.value(0, 0);
    adam.step();
    const double m_hat = -0.11 / (1 - 0.81);
    const double v_hat = 0.004999 / (1 - 0.999 * 0.999);
    CHECK(p.value(0, 0) == doctest::Approx(before - 0.01 * m_hat / (std::sqrt(v_hat) + 1e-8)).epsilon(1e-12));
}

TEST_CASE("coupled L2 penalty")
{
    ParamTensor p("p", Matrix::Constant(1, 2, 2.0));
    Adam adam({&p}, {0.01, 0.9, 0.999, 1e-8, 0.5});
    p.grad.setZero();
    adam.step();
    // effective grad = 0.5 * 2 = 1 -> same as the unit-gradient first step
    CHECK(p.value(0, 0) == doctest::Approx(2.0 - 0.01 / (1.0 + 1e-8)).epsilon(1e-14));
    CHECK(p.value(0, 1) == p.value(0, 0));
}

TEST_CASE("zero gradient without decay leaves parameters alone")
{
    CounterRng rng(1, 0);
    ParamTensor p("p", testing::random_matrix(3, 3, rng));
    const Matrix before = p.value;
    Adam adam({&p}, {0.01, 0.9, 0.999, 1e-8, 0.0});
    for (int i = 0; i < 5; ++i)
    {
        adam.zero_grad();
        adam.step();
    }
    CHECK(p.value == before);
}

TEST_CASE("non-finite gradients abort before mutation")
{
    ParamTensor a("a", Matrix::Ones(2, 2));
    ParamTensor b("b", Matrix::Ones(1, 3));
    Adam adam({&a, &b});
    a.grad.setConstant(0.3);
    b.grad(0, 1) = std::numeric_limits<double>::quiet_NaN();
    try
    {
        adam.step();
        FAIL("NaN accepted");
    }
    catch (const NumericError& e)
    {
        CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
    CHECK(a.value == Matrix::Ones(2, 2));
    CHECK(adam.step_count() == 0);
    CHECK(adam.first_moments()[0].isZero(0.0));
}

TEST_CASE("identical runs give identical trajectories")
{
    const auto run = [] {
        CounterRng rng(0, 0);
        ParamTensor p("p", testing::random_matrix(4, 2, rng));
        Adam adam({&p});
        std::vector<Matrix> path;
        for (int i = 0; i < 30; ++i)
        {
            p.grad = p.value.array().sin().matrix() + testing::random_matrix(4, 2, rng, 0.1);
            adam.step();
            path.push_back(p.value);
        }
        return path;
    };
    CHECK(run() == run());
}

TEST_CASE("adam minimizes a quadratic")
{
    ParamTensor p("p", Matrix::Constant(2, 1, 3.0));
    Adam adam({&p}, {0.05, 0.9, 0.999, 1e-8, 0.0});
    for (int i = 0; i < 2000; ++i)
    {
        p.grad = 2.0 * (p.value.array() - 1.0).matrix();
        adam.step();
    }
    CHECK(p.value(0, 0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("checkpoint tensors")
{
    CounterRng rng(2, 0);
    ParamTensor a("a", testing::random_matrix(3, 2, rng));
    ParamTensor b("b", testing::random_matrix(1, 4, rng));
    const std::vector<const ParamTensor*> out{&a, &b};
    const auto j = tensors_to_json(out);
    CHECK(j["version"] == kCheckpointVersion);

    ParamTensor a2("a", Matrix::Zero(3, 2));
    ParamTensor b2("b", Matrix::Zero(1, 4));
    std::vector<ParamTensor*> in{&a2, &b2};
    tensors_from_json(nlohmann::json::parse(j.dump()), in);
    CHECK(a2.value == a.value);
    CHECK(b2.value == b.value);

    ParamTensor wrong("a", Matrix::Zero(2, 3));
    std::vector<ParamTensor*> bad{&wrong, &b2};
    CHECK_THROWS_AS(tensors_from_json(j, bad), ShapeError);
    ParamTensor c("c", Matrix::Zero(1, 1));
    std::vector<ParamTensor*> extra{&a2, &b2, &c};
    CHECK_THROWS_AS(tensors_from_json(j, extra), ShapeError);
    std::vector<ParamTensor*> missing{&a2};
    CHECK_THROWS_AS(tensors_from_json(j, missing), ShapeError);
    auto old = j;
    old["version"] = 99;
    CHECK_THROWS(tensors_from_json(old, in));
}
