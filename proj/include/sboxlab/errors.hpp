#pragma once

#include <stdexcept>

namespace sboxlab {

// Malformed textual input (S-box files, CSV dumps, cycle lists).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter combination that can never be valid (family condition,
// cycle spec sum, out-of-range bit width).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-formed value that does not meet an operation's precondition,
// e.g. inverting a non-bijective table.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace sboxlab
