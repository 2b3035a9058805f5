#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace altsssom {

/// A precondition of a library call was not met (dimension mismatch, empty map, ...).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed input text. `line()` is 1-based; 0 when no line applies.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
[[noreturn]] inline void contract_failure(const std::string& msg) { throw ContractViolation(msg); }
}  // namespace detail

inline void require(bool condition, const char* msg) {
    if (!condition) detail::contract_failure(msg);
}

}  // namespace altsssom
