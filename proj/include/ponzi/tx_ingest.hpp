// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ponzi/bytecode.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ponzi
{
/// Transaction value in wei. 10^5 ETH is ~10^23 wei, beyond 64 bits.
using Wei = boost::multiprecision::cpp_int;

/// Lowercased, whitespace-trimmed address.
using Address = std::string;

Address normalize_address(std::string_view raw);

struct TxRecord
{
    Address from;
    Address to;
    Wei value;
    std::uint64_t timestamp = 0;
    /// Row position in the source file; breaks timestamp ties.
    std::size_t index = 0;

    friend bool operator==(const TxRecord&, const TxRecord&) = default;
};

/// Strict weak order by (timestamp, index).
inline bool chronological_less(const TxRecord& a, const TxRecord& b) noexcept
{
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.index < b.index;
}

struct LabeledAccount
{
    Address address;
    int label = 0;  // 1 = Ponzi
};

/// Parses transaction CSV text. The header must name the columns `from`,
/// `to`, `value` and `timestamp` (any order, extra columns ignored). Throws
/// ParseError carrying the 1-based line number of the offending row.
std::vector<TxRecord> parse_transactions(std::istream& in);
std::vector<TxRecord> parse_transactions_file(const std::filesystem::path& path);

/// Writes records in the format accepted by parse_transactions.
void write_transactions(std::ostream& out, const std::vector<TxRecord>& records);

/// Parses `address,label` CSV with a header row.
std::vector<LabeledAccount> parse_labels(std::istream& in);

struct AccountData
{
    Address address;
    Bytecode code;
    OpcodeHistogram histogram;
    std::vector<TxRecord> records;
    int label = 0;
};

struct Dataset
{
    std::vector<AccountData> accounts;
    /// Every address known to hold code; used to flag contract counterparties.
    std::set<Address> contracts;

    std::size_t positives() const noexcept;
};

struct LoadOptions
{
    /// Accounts with fewer transaction records are dropped.
    std::size_t min_transactions = 100;
};

/// Loads labeled accounts. Transaction files are `<tx_dir>/<address>.csv`,
/// bytecode files `<bytecode_dir>/<address>.hex`. An account without a
/// transaction file has zero records. Throws DataError listing every labeled
/// address that has no bytecode file.
Dataset load_dataset(const std::filesystem::path& tx_dir,
    const std::filesystem::path& bytecode_dir, const std::filesystem::path& labels_file,
    const LoadOptions& options = {});

/// Writes the on-disk layout read by load_dataset.
void write_dataset(const Dataset& dataset, const std::filesystem::path& root);
}  // namespace ponzi
