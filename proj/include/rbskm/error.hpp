#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rbskm {

/// Invalid argument: dimension mismatch, out-of-range index, bad parameter.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that makes the requested quantity meaningless (e.g. an all-zero matrix).
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The request exceeds what a dense fallback is allowed to handle.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// xi has a zero denominator: the residual vanishes on every selected index.
class UndefinedXiError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed Matrix Market input. `line()` is 1-based; 0 means end of stream.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rbskm
