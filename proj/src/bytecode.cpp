// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ponzi/bytecode.hpp"

#include "ponzi/error.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace ponzi
{
namespace
{
struct OpcodeInfo
{
    std::string_view name;
    std::uint8_t category = 0;
    bool defined = false;
};

// Category names in index order. Changing this list changes the feature
// layout and must bump kOpcodeTableVersion and the shipped TSV.
constexpr std::array<std::string_view, kNumOpcodeCategories> kCategoryNames = {
    "STOP", "ADD", "MUL", "SUB", "DIV", "SDIV", "MOD", "SMOD", "ADDMOD", "MULMOD", "EXP",
    "SIGNEXTEND", "LT", "GT", "SLT", "SGT", "EQ", "ISZERO", "AND", "OR", "XOR", "NOT", "BYTE",
    "SHL", "SHR", "SAR", "SHA3", "ADDRESS", "BALANCE", "ORIGIN", "CALLER", "CALLVALUE",
    "CALLDATALOAD", "CALLDATASIZE", "CALLDATACOPY", "CODESIZE", "CODECOPY", "GASPRICE",
    "EXTCODESIZE", "EXTCODECOPY", "RETURNDATASIZE", "RETURNDATACOPY", "EXTCODEHASH",
    "BLOCKHASH", "COINBASE", "TIMESTAMP", "NUMBER", "DIFFICULTY", "GASLIMIT", "POP", "MLOAD",
    "MSTORE", "MSTORE8", "SLOAD", "SSTORE", "JUMP", "JUMPI", "PC", "MSIZE", "GAS", "JUMPDEST",
    "PUSH", "DUP", "SWAP", "LOG", "CREATE", "CALL", "CALLCODE", "RETURN", "DELEGATECALL",
    "CREATE2", "STATICCALL", "REVERT", "SELFDESTRUCT", "POST_PETERSBURG", "INVALID"};

constexpr std::size_t category_named(std::string_view name)
{
    for (std::size_t i = 0; i < kCategoryNames.size(); ++i)
        if (kCategoryNames[i] == name)
            return i;
    throw "unknown category";  // compile-time failure
}

constexpr std::size_t kPushCategory = category_named("PUSH");
constexpr std::size_t kDupCategory = category_named("DUP");
constexpr std::size_t kSwapCategory = category_named("SWAP");
constexpr std::size_t kLogCategory = category_named("LOG");
constexpr std::size_t kModernCategory = category_named("POST_PETERSBURG");
constexpr std::size_t kInvalidCategory = category_named("INVALID");

constexpr std::array<std::string_view, 32> kPushNames = {"PUSH1", "PUSH2", "PUSH3", "PUSH4",
    "PUSH5", "PUSH6", "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14",
    "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23",
    "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
constexpr std::array<std::string_view, 16> kDupNames = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5",
    "DUP6", "DUP7", "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
constexpr std::array<std::string_view, 16> kSwapNames = {"SWAP1", "SWAP2", "SWAP3", "SWAP4",
    "SWAP5", "SWAP6", "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14",
    "SWAP15", "SWAP16"};
constexpr std::array<std::string_view, 5> kLogNames = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

struct SimpleOpcode
{
    std::uint8_t byte;
    std::string_view name;
    std::string_view category;
};

// Single-byte instructions that are not part of a numbered family.
constexpr SimpleOpcode kSimpleOpcodes[] = {
    {0x00, "STOP", "STOP"},
    {0x01, "ADD", "ADD"},
    {0x02, "MUL", "MUL"},
    {0x03, "SUB", "SUB"},
    {0x04, "DIV", "DIV"},
    {0x05, "SDIV", "SDIV"},
    {0x06, "MOD", "MOD"},
    {0x07, "SMOD", "SMOD"},
    {0x08, "ADDMOD", "ADDMOD"},
    {0x09, "MULMOD", "MULMOD"},
    {0x0a, "EXP", "EXP"},
    {0x0b, "SIGNEXTEND", "SIGNEXTEND"},
    {0x10, "LT", "LT"},
    {0x11, "GT", "GT"},
    {0x12, "SLT", "SLT"},
    {0x13, "SGT", "SGT"},
    {0x14, "EQ", "EQ"},
    {0x15, "ISZERO", "ISZERO"},
    {0x16, "AND", "AND"},
    {0x17, "OR", "OR"},
    {0x18, "XOR", "XOR"},
    {0x19, "NOT", "NOT"},
    {0x1a, "BYTE", "BYTE"},
    {0x1b, "SHL", "SHL"},
    {0x1c, "SHR", "SHR"},
    {0x1d, "SAR", "SAR"},
    {0x20, "SHA3", "SHA3"},
    {0x30, "ADDRESS", "ADDRESS"},
    {0x31, "BALANCE", "BALANCE"},
    {0x32, "ORIGIN", "ORIGIN"},
    {0x33, "CALLER", "CALLER"},
    {0x34, "CALLVALUE", "CALLVALUE"},
    {0x35, "CALLDATALOAD", "CALLDATALOAD"},
    {0x36, "CALLDATASIZE", "CALLDATASIZE"},
    {0x37, "CALLDATACOPY", "CALLDATACOPY"},
    {0x38, "CODESIZE", "CODESIZE"},
    {0x39, "CODECOPY", "CODECOPY"},
    {0x3a, "GASPRICE", "GASPRICE"},
    {0x3b, "EXTCODESIZE", "EXTCODESIZE"},
    {0x3c, "EXTCODECOPY", "EXTCODECOPY"},
    {0x3d, "RETURNDATASIZE", "RETURNDATASIZE"},
    {0x3e, "RETURNDATACOPY", "RETURNDATACOPY"},
    {0x3f, "EXTCODEHASH", "EXTCODEHASH"},
    {0x40, "BLOCKHASH", "BLOCKHASH"},
    {0x41, "COINBASE", "COINBASE"},
    {0x42, "TIMESTAMP", "TIMESTAMP"},
    {0x43, "NUMBER", "NUMBER"},
    {0x44, "DIFFICULTY", "DIFFICULTY"},
    {0x45, "GASLIMIT", "GASLIMIT"},
    {0x46, "CHAINID", "POST_PETERSBURG"},
    {0x47, "SELFBALANCE", "POST_PETERSBURG"},
    {0x48, "BASEFEE", "POST_PETERSBURG"},
    {0x49, "BLOBHASH", "POST_PETERSBURG"},
    {0x4a, "BLOBBASEFEE", "POST_PETERSBURG"},
    {0x50, "POP", "POP"},
    {0x51, "MLOAD", "MLOAD"},
    {0x52, "MSTORE", "MSTORE"},
    {0x53, "MSTORE8", "MSTORE8"},
    {0x54, "SLOAD", "SLOAD"},
    {0x55, "SSTORE", "SSTORE"},
    {0x56, "JUMP", "JUMP"},
    {0x57, "JUMPI", "JUMPI"},
    {0x58, "PC", "PC"},
    {0x59, "MSIZE", "MSIZE"},
    {0x5a, "GAS", "GAS"},
    {0x5b, "JUMPDEST", "JUMPDEST"},
    {0x5c, "TLOAD", "POST_PETERSBURG"},
    {0x5d, "TSTORE", "POST_PETERSBURG"},
    {0x5e, "MCOPY", "POST_PETERSBURG"},
    {0x5f, "PUSH0", "PUSH"},
    {0xf0, "CREATE", "CREATE"},
    {0xf1, "CALL", "CALL"},
    {0xf2, "CALLCODE", "CALLCODE"},
    {0xf3, "RETURN", "RETURN"},
    {0xf4, "DELEGATECALL", "DELEGATECALL"},
    {0xf5, "CREATE2", "CREATE2"},
    {0xfa, "STATICCALL", "STATICCALL"},
    {0xfd, "REVERT", "REVERT"},
    {0xfe, "INVALID", "INVALID"},
    {0xff, "SELFDESTRUCT", "SELFDESTRUCT"},
};

constexpr std::array<OpcodeInfo, 256> make_table()
{
    std::array<OpcodeInfo, 256> table{};
    for (auto& info : table)
        info = {"INVALID", static_cast<std::uint8_t>(kInvalidCategory), false};
    for (const auto& op : kSimpleOpcodes)
        table[op.byte] = {op.name, static_cast<std::uint8_t>(category_named(op.category)), true};
    for (std::size_t i = 0; i < kPushNames.size(); ++i)
        table[0x60 + i] = {kPushNames[i], static_cast<std::uint8_t>(kPushCategory), true};
    for (std::size_t i = 0; i < kDupNames.size(); ++i)
        table[0x80 + i] = {kDupNames[i], static_cast<std::uint8_t>(kDupCategory), true};
    for (std::size_t i = 0; i < kSwapNames.size(); ++i)
        table[0x90 + i] = {kSwapNames[i], static_cast<std::uint8_t>(kSwapCategory), true};
    for (std::size_t i = 0; i < kLogNames.size(); ++i)
        table[0xa0 + i] = {kLogNames[i], static_cast<std::uint8_t>(kLogCategory), true};
    return table;
}

constexpr auto kOpcodeTable = make_table();

static_assert(kOpcodeTable[0x3d].category == category_named("RETURNDATASIZE"));
static_assert(kOpcodeTable[0x7f].name == "PUSH32");
static_assert(kOpcodeTable[0x0c].category == kInvalidCategory);
static_assert(kModernCategory == kNumOpcodeCategories - 2);

int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

bool is_space(char c) noexcept
{
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}
}  // namespace

std::string_view mnemonic(std::uint8_t byte) noexcept
{
    return kOpcodeTable[byte].name;
}

bool is_defined(std::uint8_t byte) noexcept
{
    return kOpcodeTable[byte].defined;
}

std::size_t immediate_size(Opcode op) noexcept
{
    const auto byte = static_cast<std::uint8_t>(op);
    if (byte >= 0x60 && byte <= 0x7f)
        return byte - 0x5fu;
    return 0;
}

std::size_t category_of(Opcode op) noexcept
{
    return kOpcodeTable[static_cast<std::uint8_t>(op)].category;
}

std::string_view category_name(std::size_t index)
{
    if (index >= kCategoryNames.size())
        throw Error("opcode category index out of range: " + std::to_string(index));
    return kCategoryNames[index];
}

std::size_t category_index(std::string_view name)
{
    const auto it = std::find(kCategoryNames.begin(), kCategoryNames.end(), name);
    if (it == kCategoryNames.end())
        throw Error("unknown opcode category: " + std::string{name});
    return static_cast<std::size_t>(it - kCategoryNames.begin());
}

std::vector<Opcode> disassemble(std::span<const std::uint8_t> code)
{
    std::vector<Opcode> ops;
    ops.reserve(code.size());
    std::size_t pc = 0;
    while (pc < code.size())
    {
        const auto byte = code[pc];
        const auto op = is_defined(byte) ? static_cast<Opcode>(byte) : Opcode::INVALID;
        ops.push_back(op);
        pc += 1 + immediate_size(op);
    }
    return ops;
}

OpcodeHistogram& OpcodeHistogram::operator+=(const OpcodeHistogram& other) noexcept
{
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] += other.counts[i];
    total += other.total;
    return *this;
}

std::vector<double> OpcodeHistogram::to_features(bool normalize) const
{
    std::vector<double> out(counts.size());
    const double denom = (normalize && total > 0) ? static_cast<double>(total) : 1.0;
    for (std::size_t i = 0; i < counts.size(); ++i)
        out[i] = static_cast<double>(counts[i]) / denom;
    return out;
}

OpcodeHistogram opcode_histogram(std::span<const Opcode> ops) noexcept
{
    OpcodeHistogram h;
    for (const auto op : ops)
        ++h.counts[category_of(op)];
    h.total = ops.size();
    return h;
}

OpcodeHistogram code_features(std::span<const std::uint8_t> code)
{
    const auto ops = disassemble(code);
    return opcode_histogram(ops);
}

Bytecode decode_hex(std::string_view text)
{
    while (!text.empty() && is_space(text.front()))
        text.remove_prefix(1);
    while (!text.empty() && is_space(text.back()))
        text.remove_suffix(1);
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
        text.remove_prefix(2);

    Bytecode bytes;
    bytes.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2)
    {
        const int hi = hex_value(text[i]);
        if (hi < 0)
            throw ParseError("non-hex character at offset " + std::to_string(i), i);
        if (i + 1 == text.size())
            throw ParseError("odd-length hex, missing digit at offset " + std::to_string(i + 1), i + 1);
        const int lo = hex_value(text[i + 1]);
        if (lo < 0)
            throw ParseError("non-hex character at offset " + std::to_string(i + 1), i + 1);
        bytes.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
    }
    return bytes;
}

std::string encode_hex(std::span<const std::uint8_t> bytes, bool prefix)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = prefix ? "0x" : "";
    out.reserve(out.size() + 2 * bytes.size());
    for (const auto b : bytes)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytecode load_bytecode_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open bytecode file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try
    {
        return decode_hex(buf.str());
    }
    catch (const ParseError& e)
    {
        throw ParseError(path.string() + ": " + e.what(), e.position());
    }
}

std::string category_table_tsv()
{
    std::string out = "# opcode category table v" + std::string{kOpcodeTableVersion} + "\n";
    out += "index\tcategory\tmembers\n";
    for (std::size_t c = 0; c < kNumOpcodeCategories; ++c)
    {
        out += std::to_string(c) + '\t' + std::string{kCategoryNames[c]} + '\t';
        bool first = true;
        for (std::size_t b = 0; b < 256; ++b)
        {
            const auto& info = kOpcodeTable[b];
            if (info.category != c || !info.defined)
                continue;
            if (!first)
                out += ',';
            out += info.name;
            first = false;
        }
        if (c == kInvalidCategory)
            out += ",<unassigned>";
        out += '\n';
    }
    return out;
}
}  // namespace ponzi
