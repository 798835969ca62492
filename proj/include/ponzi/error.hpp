// ponzi-warning: dual-channel early warning for Ethereum Ponzi schemes
// Copyright 2026 The ponzi-warning Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ponzi
{
/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position` is a line number for CSV input and a
/// character offset for hex input.
class ParseError : public Error
{
public:
    ParseError(const std::string& what, std::size_t position)
      : Error(what), position_{position}
    {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class DataError : public Error
{
public:
    using Error::Error;
};

class ShapeError : public Error
{
public:
    using Error::Error;
};

/// A NaN or infinity appeared in a tensor.
class NumericError : public Error
{
public:
    using Error::Error;
};
}  // namespace ponzi
