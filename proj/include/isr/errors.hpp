#pragma once

#include <stdexcept>
#include <string>

namespace isr {

// Precondition violations reuse std::invalid_argument.

/// Thrown when a search or enumeration would exceed its configured budget.
class resource_exhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant that should hold on valid input was found broken.
class invariant_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed text input (instance, sequence, .gr, .td, DIMACS).
class parse_error : public std::runtime_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace isr
