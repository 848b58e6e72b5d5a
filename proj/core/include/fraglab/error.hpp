#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraglab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SourceSpan {
    std::size_t line = 1;
    std::size_t column = 1;
    std::size_t offset = 0;
};

struct ParseError : Error {
    ParseError(const std::string& msg, SourceSpan where)
        : Error(msg + " at " + std::to_string(where.line) + ":" + std::to_string(where.column)),
          message(msg), span(where) {}
    std::string message;
    SourceSpan span;
};

// formula outside the fragment an operation expects, unknown predicate, ...
struct ValidationError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct OverflowError : Error {
    using Error::Error;
};

}  // namespace fraglab
