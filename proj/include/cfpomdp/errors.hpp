#pragma once

#include <stdexcept>
#include <string>

namespace cfpomdp {

/// Malformed user input: unknown symbols, syntax errors, invalid files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold
/// (e.g. a non-deterministic environment passed where one is required).
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Violated internal consistency; indicates a bug, not bad input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace cfpomdp
