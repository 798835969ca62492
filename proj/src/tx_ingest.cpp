// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/tx_ingest.hpp"

#include "ponzi/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

namespace ponzi
{
namespace
{
std::string_view trim(std::string_view s) noexcept
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true)
    {
        const auto comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

std::string lower(std::string_view s)
{
    std::string out{s};
    std::transform(out.begin(), out.end(), out.begin(),
        [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool blank(std::string_view line) noexcept
{
    return trim(line).empty();
}

[[noreturn]] void fail(std::size_t line, const std::string& msg)
{
    throw ParseError("line " + std::to_string(line) + ": " + msg, line);
}

Wei parse_wei(std::string_view text, std::size_t line)
{
    if (text.empty())
        fail(line, "empty value");
    if (text.front() == '-')
        fail(line, "negative value '" + std::string{text} + "'");
    if (text.front() == '+')
        text.remove_prefix(1);
    if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
        fail(line, "value is not a non-negative integer: '" + std::string{text} + "'");
    return Wei{std::string{text}};
}

std::uint64_t parse_timestamp(std::string_view text, std::size_t line)
{
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (text.empty() || ec != std::errc{} || ptr != end)
        fail(line, "invalid timestamp '" + std::string{text} + "'");
    return v;
}

}  // namespace

Address normalize_address(std::string_view raw)
{
    return lower(trim(raw));
}

std::vector<TxRecord> parse_transactions(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!blank(line))
            break;
    }
    if (blank(line))
        return {};

    constexpr std::array<std::string_view, 4> kColumns = {"from", "to", "value", "timestamp"};
    std::array<std::optional<std::size_t>, 4> column;
    const auto header = split_fields(line);
    for (std::size_t i = 0; i < header.size(); ++i)
    {
        const auto name = lower(header[i]);
        for (std::size_t c = 0; c < kColumns.size(); ++c)
            if (name == kColumns[c] && !column[c])
                column[c] = i;
    }
    for (std::size_t c = 0; c < kColumns.size(); ++c)
        if (!column[c])
            fail(line_no, "header is missing column '" + std::string{kColumns[c]} + "'");
    const std::size_t needed =
        1 + std::max({*column[0], *column[1], *column[2], *column[3]});

    std::vector<TxRecord> records;
    while (std::getline(in, line))
    {
        ++line_no;
        if (blank(line))
            continue;
        const auto fields = split_fields(line);
        if (fields.size() < needed)
            fail(line_no, "expected at least " + std::to_string(needed) + " fields, got " +
                              std::to_string(fields.size()));
        TxRecord r;
        r.from = normalize_address(fields[*column[0]]);
        r.to = normalize_address(fields[*column[1]]);
        if (r.from.empty() || r.to.empty())
            fail(line_no, "empty address");
        r.value = parse_wei(fields[*column[2]], line_no);
        r.timestamp = parse_timestamp(fields[*column[3]], line_no);
        r.index = records.size();
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<TxRecord> parse_transactions_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open transaction file " + path.string());
    try
    {
        return parse_transactions(in);
    }
    catch (const ParseError& e)
    {
        throw ParseError(path.string() + ": " + e.what(), e.position());
    }
}

void write_transactions(std::ostream& out, const std::vector<TxRecord>& records)
{
    out << "from,to,value,timestamp\n";
    for (const auto& r : records)
        out << r.from << ',' << r.to << ',' << r.value.str() << ',' << r.timestamp << '\n';
}

std::vector<LabeledAccount> parse_labels(std::istream& in)
{
    std::string line;
    std::size_t line_no = 0;
    std::vector<LabeledAccount> out;
    std::set<Address> seen;
    bool header_done = false;
    while (std::getline(in, line))
    {
        ++line_no;
        if (blank(line))
            continue;
        const auto fields = split_fields(line);
        if (!header_done)
        {
            header_done = true;
            if (fields.size() < 2 || lower(fields[0]) != "address" || lower(fields[1]) != "label")
                fail(line_no, "labels header must be 'address,label'");
            continue;
        }
        if (fields.size() < 2)
            fail(line_no, "expected address,label");
        LabeledAccount a{normalize_address(fields[0]), 0};
        if (a.address.empty())
            fail(line_no, "empty address");
        if (fields[1] == "0")
            a.label = 0;
        else if (fields[1] == "1")
            a.label = 1;
        else
            fail(line_no, "label must be 0 or 1, got '" + std::string{fields[1]} + "'");
        if (!seen.insert(a.address).second)
            fail(line_no, "duplicate address " + a.address);
        out.push_back(std::move(a));
    }
    return out;
}

std::size_t Dataset::positives() const noexcept
{
    return static_cast<std::size_t>(std::count_if(
        accounts.begin(), accounts.end(), [](const AccountData& a) { return a.label == 1; }));
}

Dataset load_dataset(const std::filesystem::path& tx_dir,
    const std::filesystem::path& bytecode_dir, const std::filesystem::path& labels_file,
    const LoadOptions& options)
{
    namespace fs = std::filesystem;
    std::ifstream labels_in(labels_file);
    if (!labels_in)
        throw DataError("cannot open labels file " + labels_file.string());
    const auto labels = parse_labels(labels_in);

    Dataset ds;
    if (fs::is_directory(bytecode_dir))
    {
        for (const auto& entry : fs::directory_iterator(bytecode_dir))
            if (entry.is_regular_file() && entry.path().extension() == ".hex")
                ds.contracts.insert(normalize_address(entry.path().stem().string()));
    }

    std::vector<Address> missing;
    for (const auto& l : labels)
        if (!ds.contracts.contains(l.address))
            missing.push_back(l.address);
    if (!missing.empty())
    {
        std::string msg = "missing bytecode file for " + std::to_string(missing.size()) + " labeled address(es):";
        for (const auto& a : missing)
            msg += ' ' + a;
        throw DataError(msg);
    }

    for (const auto& l : labels)
    {
        const auto tx_path = tx_dir / (l.address + ".csv");
        auto records = fs::exists(tx_path) ? parse_transactions_file(tx_path) : std::vector<TxRecord>{};
        if (records.size() < options.min_transactions)
            continue;
        AccountData acc;
        acc.address = l.address;
        acc.label = l.label;
        acc.code = load_bytecode_file(bytecode_dir / (l.address + ".hex"));
        acc.histogram = code_features(acc.code);
        acc.records = std::move(records);
        ds.accounts.push_back(std::move(acc));
    }
    return ds;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& root)
{
    namespace fs = std::filesystem;
    fs::create_directories(root / "tx");
    fs::create_directories(root / "bytecode");
    std::set<Address> written;
    for (const auto& acc : dataset.accounts)
    {
        std::ofstream tx(root / "tx" / (acc.address + ".csv"), std::ios::binary);
        write_transactions(tx, acc.records);
        std::ofstream code(root / "bytecode" / (acc.address + ".hex"), std::ios::binary);
        code << encode_hex(acc.code) << '\n';
        written.insert(acc.address);
    }
    for (const auto& c : dataset.contracts)
    {
        if (written.contains(c))
            continue;
        std::ofstream code(root / "bytecode" / (c + ".hex"), std::ios::binary);
        code << "0x00\n";
    }
    std::ofstream labels(root / "labels.csv", std::ios::binary);
    labels << "address,label\n";
    for (const auto& acc : dataset.accounts)
        labels << acc.address << ',' << acc.label << '\n';
}
}  // namespace ponzi
