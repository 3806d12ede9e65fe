#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace linstab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violated a stated hypothesis of the operation.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A configured resource limit (window length, period, step budget) was hit.
class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Malformed text; `position` is the 0-based offset of the offending character.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : Error(what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Well-formed text with an invalid value (non-positive modulus, zero coefficient, ...).
class SemanticError : public Error {
 public:
  using Error::Error;
};

}  // namespace linstab
