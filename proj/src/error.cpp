#include "kmseg/error.hpp"

namespace kmseg {

namespace {

std::string positioned(const std::string& what, std::size_t line, std::size_t column)
{
    if (line == 0) return what;
    std::string out = "line " + std::to_string(line);
    if (column != 0) out += ", column " + std::to_string(column);
    return out + ": " + what;
}

} // namespace

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(positioned(what, line, column)), line_(line), column_(column)
{
}

} // namespace kmseg
