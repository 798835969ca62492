// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/synth.hpp"

#include "ponzi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace ponzi
{
namespace
{
constexpr std::uint64_t kAddressStream = 11;
constexpr std::size_t kHelperContracts = 24;

const Wei kFinney{"1000000000000000"};  // 10^15 wei

Address random_address(CounterRng& rng)
{
    static constexpr char digits[] = "0123456789abcdef";
    Address a = "0x";
    for (int i = 0; i < 40; ++i)
        a.push_back(digits[rng.below(16)]);
    return a;
}

Wei finney(std::uint64_t amount)
{
    return kFinney * amount;
}

struct WeightedOp
{
    std::uint8_t byte;
    double weight;
};

// Rough instruction mix of compiled Solidity.
constexpr WeightedOp kBaseProfile[] = {
    {0x60, 18.0}, {0x61, 6.0}, {0x63, 2.0}, {0x73, 1.0}, {0x7f, 0.8}, {0x80, 6.0}, {0x81, 4.0},
    {0x82, 2.5}, {0x83, 1.5}, {0x84, 0.8}, {0x90, 5.0}, {0x91, 3.0}, {0x92, 1.5}, {0x93, 0.8},
    {0x5b, 5.0}, {0x57, 3.5}, {0x56, 3.5}, {0x50, 6.0}, {0x52, 3.0}, {0x51, 2.5}, {0x54, 2.0},
    {0x55, 1.2}, {0x01, 3.0}, {0x03, 1.5}, {0x02, 1.0}, {0x04, 1.0}, {0x16, 3.0}, {0x17, 0.8},
    {0x14, 2.0}, {0x15, 3.0}, {0x10, 1.2}, {0x11, 1.2}, {0x19, 0.6}, {0x1b, 0.4}, {0x1c, 0.4},
    {0x20, 1.0}, {0x33, 0.8}, {0x34, 0.6}, {0x35, 0.8}, {0x36, 0.4}, {0x39, 0.2}, {0x3d, 0.15},
    {0x3e, 0.08}, {0x31, 0.15}, {0x42, 0.1}, {0x43, 0.05}, {0xf1, 0.2}, {0xf3, 0.3}, {0xfd, 0.5},
    {0xa1, 0.2}, {0xa2, 0.1}, {0xa3, 0.15}, {0x00, 0.4}, {0xfe, 0.1}, {0x5a, 0.3}, {0x30, 0.2},
    {0x3b, 0.1}, {0x0a, 0.3}, {0x06, 0.3}, {0x32, 0.05}, {0xff, 0.02}};

// Instructions whose frequency rises in Ponzi-style contracts: return-data
// handling and value movement.
constexpr WeightedOp kPonziBias[] = {
    {0x3d, 1.6}, {0x3e, 0.9}, {0xf1, 0.9}, {0x31, 0.7}, {0x34, 0.6}, {0x42, 0.4}, {0x30, 0.3}};

Bytecode generate_code(CounterRng& rng, double bias)
{
    std::vector<WeightedOp> ops(std::begin(kBaseProfile), std::end(kBaseProfile));
    for (auto& op : ops)
        op.weight *= std::exp(0.35 * rng.normal());
    for (const auto& b : kPonziBias)
        for (auto& op : ops)
            if (op.byte == b.byte)
                op.weight += bias * b.weight * std::exp(0.3 * rng.normal());

    double total = 0.0;
    for (const auto& op : ops)
        total += op.weight;

    const auto length = 400 + rng.below(1200);
    Bytecode code;
    code.reserve(length * 2);
    for (std::uint64_t i = 0; i < length; ++i)
    {
        double u = rng.uniform() * total;
        std::uint8_t byte = ops.back().byte;
        for (const auto& op : ops)
        {
            if (u < op.weight)
            {
                byte = op.byte;
                break;
            }
            u -= op.weight;
        }
        code.push_back(byte);
        if (byte >= 0x60 && byte <= 0x7f)
            for (int k = 0; k < byte - 0x5f; ++k)
                code.push_back(static_cast<std::uint8_t>(rng.below(256)));
    }
    return code;
}

class Clock
{
public:
    explicit Clock(CounterRng& rng)
      : rng_{rng}, now_{1'450'000'000 + rng.below(100'000'000)}
    {}

    /// Next timestamp; ties with the previous one are allowed unless
    /// `strictly_later` is set.
    std::uint64_t tick(bool strictly_later)
    {
        if (!strictly_later && rng_.bernoulli(0.12))
            return now_;
        const double gap = -std::log(1.0 - rng_.uniform()) * 2400.0;
        now_ += 1 + static_cast<std::uint64_t>(gap);
        return now_;
    }

private:
    CounterRng& rng_;
    std::uint64_t now_;
};

std::vector<TxRecord> ponzi_records(CounterRng& rng, const Address& target, std::size_t count)
{
    struct Investor
    {
        Address address;
        Wei invested;
    };
    std::vector<Investor> investors;
    std::vector<TxRecord> out;
    Clock clock(rng);
    Wei balance = 0;
    std::size_t next_payee = 0;
    const Address owner = random_address(rng);
    const double payout_rate = rng.uniform(0.25, 0.45);

    // Deployment phase: the owner and a few testers poke the contract before
    // the scheme opens, which looks much like ordinary traffic.
    const Address testers[] = {owner, random_address(rng), random_address(rng)};
    const auto warmup = std::min<std::size_t>(count, rng.below(13));
    for (std::size_t w = 0; w < warmup; ++w)
    {
        const Wei amount = rng.bernoulli(0.5) ? Wei{0} : finney(1 + rng.below(50));
        balance += amount;
        out.push_back({testers[rng.below(3)], target, amount, clock.tick(false), out.size()});
    }

    while (out.size() < count)
    {
        TxRecord r;
        const bool can_pay = balance > 0 && !investors.empty();
        if (can_pay && rng.bernoulli(payout_rate))
        {
            // Pay the earliest unpaid investor from accumulated deposits.
            Address payee;
            Wei amount;
            if (rng.bernoulli(0.15))
            {
                payee = owner;
                amount = balance / 10;
            }
            else
            {
                auto& inv = investors[next_payee % investors.size()];
                ++next_payee;
                payee = inv.address;
                amount = inv.invested * (110 + rng.below(40)) / 100;
            }
            if (amount > balance)
                amount = balance;
            if (amount == 0)
                continue;
            balance -= amount;
            r = {target, payee, amount, clock.tick(true), 0};
        }
        else
        {
            const bool fresh = investors.empty() || rng.bernoulli(0.75);
            if (fresh)
                investors.push_back({random_address(rng), 0});
            auto& inv = fresh ? investors.back() : investors[rng.below(investors.size())];
            const Wei amount = finney(100 + rng.below(4900));
            inv.invested += amount;
            balance += amount;
            r = {inv.address, target, amount, clock.tick(false), 0};
        }
        r.index = out.size();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<TxRecord> normal_records(CounterRng& rng, const Address& target, std::size_t count,
    const std::vector<Address>& helpers)
{
    std::vector<TxRecord> out;
    Clock clock(rng);
    const auto kind = rng.below(3);  // 0 token-like, 1 wallet-like, 2 service-like
    std::vector<Address> users;
    const std::size_t pool = kind == 1 ? 2 + rng.below(5) : std::max<std::size_t>(4, count / (2 + rng.below(4)));
    for (std::size_t i = 0; i < pool; ++i)
        users.push_back(random_address(rng));
    const Address& helper = helpers[rng.below(helpers.size())];

    while (out.size() < count)
    {
        TxRecord r;
        const double u = rng.uniform();
        // Heavy users come first in the pool.
        const auto pick = [&] {
            const auto i = static_cast<std::size_t>(std::pow(rng.uniform(), 2.0) * static_cast<double>(users.size()));
            return users[std::min(i, users.size() - 1)];
        };
        if (kind == 0)
        {
            if (u < 0.8)
                r = {pick(), target, 0, 0, 0};
            else if (u < 0.9)
                r = {pick(), target, finney(1 + rng.below(300)), 0, 0};
            else
                r = {target, helper, 0, 0, 0};
        }
        else if (kind == 1)
        {
            if (u < 0.45)
                r = {pick(), target, finney(10 + rng.below(20000)), 0, 0};
            else if (u < 0.8)
                r = {target, rng.bernoulli(0.5) ? pick() : random_address(rng), finney(10 + rng.below(8000)), 0, 0};
            else
                r = {target, helpers[rng.below(helpers.size())], finney(rng.below(2000)), 0, 0};
        }
        else
        {
            if (u < 0.5)
                r = {pick(), target, finney(rng.below(3000)), 0, 0};
            else if (u < 0.85)
                r = {target, pick(), finney(rng.below(3000)), 0, 0};
            else
                r = {helpers[rng.below(helpers.size())], target, 0, 0, 0};
        }
        r.timestamp = clock.tick(false);
        r.index = out.size();
        out.push_back(std::move(r));
    }
    return out;
}
}  // namespace

Dataset synth_generate(const SynthOptions& options)
{
    CounterRng rng(options.seed, kAddressStream);
    Dataset ds;

    std::vector<Address> helpers;
    for (std::size_t i = 0; i < kHelperContracts; ++i)
    {
        helpers.push_back(random_address(rng));
        ds.contracts.insert(helpers.back());
    }

    const auto minimum = options.delta * options.steps;
    const auto total = options.n_ponzi + options.n_normal;
    // Interleave labels so that file order carries no label information.
    std::vector<int> labels(total, 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(options.n_ponzi), 1);
    rng.shuffle(labels.begin(), labels.end());

    for (std::size_t i = 0; i < total; ++i)
    {
        AccountData acc;
        acc.address = random_address(rng);
        acc.label = labels[i];
        const auto count = minimum + rng.below(std::max<std::size_t>(options.delta, 1) * 2 + 1);
        double bias = 0.0;
        if (acc.label == 1)
            bias = rng.bernoulli(0.8) ? rng.uniform(0.4, 1.2) : rng.uniform(0.0, 0.3);
        else if (rng.bernoulli(0.15))
            bias = rng.uniform(0.0, 0.8);
        acc.code = generate_code(rng, bias);
        acc.histogram = code_features(acc.code);
        acc.records = acc.label == 1 ? ponzi_records(rng, acc.address, count)
                                     : normal_records(rng, acc.address, count, helpers);
        ds.contracts.insert(acc.address);
        ds.accounts.push_back(std::move(acc));
    }
    return ds;
}
}  // namespace ponzi
