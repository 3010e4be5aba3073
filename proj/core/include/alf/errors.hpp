#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace alf {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: bad parameters, labels out of range, unparseable text.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// Input lies where a formula is undefined (e.g. log at a zero probability).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The loss is constant where a ratio or bound needs it to vary.
class DegenerateLoss : public Error {
 public:
  using Error::Error;
};

/// A documented precondition on a model or dataset does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Binary file does not follow the expected layout.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Iterative optimisation produced non-finite values.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what + " (at step " + std::to_string(step) + ")"), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

}  // namespace alf
