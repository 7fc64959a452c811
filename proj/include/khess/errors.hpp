#pragma once

#include <stdexcept>
#include <string>

namespace khess {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symmetric-function order k outside [0, n].
struct OrderRangeError : Error {
  using Error::Error;
};

/// Non-finite entries, mismatched dimensions or mismatched kinds.
struct InvalidInputError : Error {
  using Error::Error;
};

/// A size guard was exceeded (Kronecker-delta route is restricted to small n).
struct CapacityError : Error {
  using Error::Error;
};

/// The cone point mu sits on the boundary of the Garding cone (zero slack);
/// the bound constant eps^-(k-m) is undefined there.
struct DegenerateMuError : Error {
  using Error::Error;
};

/// A documented operation precondition does not hold for the given inputs.
struct PreconditionError : Error {
  using Error::Error;
};

/// The black-box functional handed to the algebraic lemma harness returned a
/// negative value, violating the lemma's hypothesis.
struct HypothesisViolationError : Error {
  using Error::Error;
};

/// Malformed or inconsistent configuration; carries the offending field name.
struct ConfigError : Error {
  ConfigError(std::string field_name, const std::string& what)
      : Error(what), field(std::move(field_name)) {}
  std::string field;
};

}  // namespace khess
