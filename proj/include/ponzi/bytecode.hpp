// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ponzi
{
/// Raw deployed EVM code.
using Bytecode = std::vector<std::uint8_t>;

/// EVM opcode identifier. The numeric value is the opcode byte. Bytes that
/// are not assigned an instruction disassemble to `INVALID`.
enum class Opcode : std::uint8_t
{
    STOP = 0x00,
    ADD = 0x01,
    MUL = 0x02,
    SUB = 0x03,
    DIV = 0x04,
    SDIV = 0x05,
    MOD = 0x06,
    SMOD = 0x07,
    ADDMOD = 0x08,
    MULMOD = 0x09,
    EXP = 0x0a,
    SIGNEXTEND = 0x0b,

    LT = 0x10,
    GT = 0x11,
    SLT = 0x12,
    SGT = 0x13,
    EQ = 0x14,
    ISZERO = 0x15,
    AND = 0x16,
    OR = 0x17,
    XOR = 0x18,
    NOT = 0x19,
    BYTE = 0x1a,
    SHL = 0x1b,
    SHR = 0x1c,
    SAR = 0x1d,

    SHA3 = 0x20,

    ADDRESS = 0x30,
    BALANCE = 0x31,
    ORIGIN = 0x32,
    CALLER = 0x33,
    CALLVALUE = 0x34,
    CALLDATALOAD = 0x35,
    CALLDATASIZE = 0x36,
    CALLDATACOPY = 0x37,
    CODESIZE = 0x38,
    CODECOPY = 0x39,
    GASPRICE = 0x3a,
    EXTCODESIZE = 0x3b,
    EXTCODECOPY = 0x3c,
    RETURNDATASIZE = 0x3d,
    RETURNDATACOPY = 0x3e,
    EXTCODEHASH = 0x3f,

    BLOCKHASH = 0x40,
    COINBASE = 0x41,
    TIMESTAMP = 0x42,
    NUMBER = 0x43,
    DIFFICULTY = 0x44,
    GASLIMIT = 0x45,
    CHAINID = 0x46,
    SELFBALANCE = 0x47,
    BASEFEE = 0x48,
    BLOBHASH = 0x49,
    BLOBBASEFEE = 0x4a,

    POP = 0x50,
    MLOAD = 0x51,
    MSTORE = 0x52,
    MSTORE8 = 0x53,
    SLOAD = 0x54,
    SSTORE = 0x55,
    JUMP = 0x56,
    JUMPI = 0x57,
    PC = 0x58,
    MSIZE = 0x59,
    GAS = 0x5a,
    JUMPDEST = 0x5b,
    TLOAD = 0x5c,
    TSTORE = 0x5d,
    MCOPY = 0x5e,
    PUSH0 = 0x5f,

    PUSH1 = 0x60,
    PUSH2 = 0x61,
    PUSH32 = 0x7f,
    DUP1 = 0x80,
    DUP16 = 0x8f,
    SWAP1 = 0x90,
    SWAP16 = 0x9f,
    LOG0 = 0xa0,
    LOG4 = 0xa4,

    CREATE = 0xf0,
    CALL = 0xf1,
    CALLCODE = 0xf2,
    RETURN = 0xf3,
    DELEGATECALL = 0xf4,
    CREATE2 = 0xf5,
    STATICCALL = 0xfa,
    REVERT = 0xfd,
    INVALID = 0xfe,
    SELFDESTRUCT = 0xff,
};

/// Number of opcode categories in the code feature vector.
inline constexpr std::size_t kNumOpcodeCategories = 76;

/// Version tag of the frozen category table (data/opcode_categories.tsv).
inline constexpr std::string_view kOpcodeTableVersion = "1";

/// Mnemonic for an opcode byte, e.g. "PUSH7". Unassigned bytes yield "INVALID".
std::string_view mnemonic(std::uint8_t byte) noexcept;
inline std::string_view mnemonic(Opcode op) noexcept { return mnemonic(static_cast<std::uint8_t>(op)); }

/// True if the byte is an assigned instruction in the current EVM.
bool is_defined(std::uint8_t byte) noexcept;

/// Number of immediate bytes following the opcode (1..32 for PUSH1..PUSH32).
std::size_t immediate_size(Opcode op) noexcept;

/// Category index in [0, 76) of an opcode.
///
/// The families PUSH0..PUSH32, DUP1..DUP16, SWAP1..SWAP16 and LOG0..LOG4
/// each collapse to one category. Instructions introduced after the
/// Petersburg fork share one category, and INVALID (0xfe) shares its
/// category with every unassigned byte.
std::size_t category_of(Opcode op) noexcept;

/// Name of category `index`, e.g. "PUSH" or "RETURNDATASIZE".
std::string_view category_name(std::size_t index);

/// Category index with the given name; throws ponzi::Error when unknown.
std::size_t category_index(std::string_view name);

/// Disassembles code into opcode identifiers in byte order. PUSH immediates
/// are skipped; a truncated immediate at the end of code is consumed.
std::vector<Opcode> disassemble(std::span<const std::uint8_t> code);

struct OpcodeHistogram
{
    std::array<std::uint64_t, kNumOpcodeCategories> counts{};
    std::uint64_t total = 0;

    OpcodeHistogram& operator+=(const OpcodeHistogram& other) noexcept;
    friend OpcodeHistogram operator+(OpcodeHistogram a, const OpcodeHistogram& b) noexcept { return a += b; }
    friend bool operator==(const OpcodeHistogram&, const OpcodeHistogram&) = default;

    std::uint64_t operator[](std::size_t category) const { return counts.at(category); }

    /// Feature vector of length 76: raw counts, or counts divided by total
    /// when `normalize` is set (all zeros for an empty histogram).
    std::vector<double> to_features(bool normalize = false) const;
};

OpcodeHistogram opcode_histogram(std::span<const Opcode> ops) noexcept;

/// disassemble + opcode_histogram.
OpcodeHistogram code_features(std::span<const std::uint8_t> code);

/// Decodes hex text with an optional "0x" prefix and surrounding whitespace.
/// Throws ParseError whose position is the character offset inside the hex
/// digits; for odd-length input that is the offset of the missing digit.
Bytecode decode_hex(std::string_view text);

std::string encode_hex(std::span<const std::uint8_t> bytes, bool prefix = true);

Bytecode load_bytecode_file(const std::filesystem::path& path);

/// Renders the category table in the TSV layout of data/opcode_categories.tsv.
std::string category_table_tsv();
}  // namespace ponzi
