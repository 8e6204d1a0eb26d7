#pragma once

#include <stdexcept>
#include <string>

namespace kempner {

// Malformed spec strings (sequence / forbidden / index grammars).
// Messages carry a 0-based character position.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " (at position " + std::to_string(position) + ")"),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Structurally inconsistent inputs: radix mismatch between a digit vector
// and a sequence, or a quotient requested beyond a finite sequence.
class structural_error : public std::runtime_error {
public:
    explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// The requested operation is only valid for bounded quotients with
// lambda < 1/d (or, for summations, for a geometric ratio below 1).
class regime_error : public std::runtime_error {
public:
    explicit regime_error(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed the configured budget.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace kempner
