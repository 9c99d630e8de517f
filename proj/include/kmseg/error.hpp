#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kmseg {

/// Base class for every error raised by the library. All of these map to
/// exit code 1 in the command-line tool.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed text, CSV or PGM input. Carries a 1-based line and column when
/// the failure can be pinned to a position (0 means "not applicable").
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

} // namespace kmseg
