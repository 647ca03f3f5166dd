#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lgre {

/// Violated model invariant or unknown element/relation.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Syntax error in model or formula text. Line and column are 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Formula mentions a relation the model does not declare, or has free
/// variables outside the requested arity.
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An EPFOL/FOL simulation query exceeded the brute-force domain cap.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lgre
