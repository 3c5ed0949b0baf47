#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lk {

// Endpoint or shifted set escapes the ambient interval.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A structural invariant (nesting direction, partition property) failed.
class InvariantError : public std::logic_error {
public:
    InvariantError(const std::string& what, long long at = -1)
        : std::logic_error(what), at_(at) {}
    long long at() const noexcept { return at_; }

private:
    long long at_;
};

// A search horizon or budget ran out before a certificate was found.
class NotCertifiedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pointwise evaluation hit an undefined form (0/0, sqrt of a negative, ...).
class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An enclosure is unbounded where a bounded one is required.
class UnboundedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// `column` is the 1-based character position of the offending input.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t column)
        : std::runtime_error(msg + " at column " + std::to_string(column)),
          message_(msg), column_(column) {}
    std::size_t column() const noexcept { return column_; }
    const std::string& message() const noexcept { return message_; }

private:
    std::string message_;
    std::size_t column_;
};

}  // namespace lk
