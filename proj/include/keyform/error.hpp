#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace keyform {

/// Malformed textual input. `position` is a byte offset into the parsed text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// Input is well formed but violates a mathematical precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An internal invariant failed. The message carries a dump of the state.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace keyform
