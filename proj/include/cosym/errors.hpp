#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cosym {

enum class ErrorKind { Input, Precondition, Integrity, UnsupportedModel };

std::string_view to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind drives CLI exit codes
/// and report classification.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Malformed or inconsistent input (dimensions, parse failures, references).
class InputError : public Error {
 public:
  explicit InputError(const std::string& message) : Error(ErrorKind::Input, message) {}
};

/// Well-formed input that violates a mathematical hypothesis of an operation.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& message)
      : Error(ErrorKind::Precondition, message) {}
};

/// An internal contradiction, e.g. a verified structure whose Reeb system is singular.
class IntegrityError : public Error {
 public:
  explicit IntegrityError(const std::string& message) : Error(ErrorKind::Integrity, message) {}
};

class UnsupportedModelError : public Error {
 public:
  explicit UnsupportedModelError(const std::string& message)
      : Error(ErrorKind::UnsupportedModel, message) {}
};

}  // namespace cosym
