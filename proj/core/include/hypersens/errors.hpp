#pragma once

#include <stdexcept>
#include <string>

namespace hypersens {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter or input value lies outside its documented domain.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An eigensolver or other numerical kernel failed to produce a usable result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The requested computation would exceed the configured memory budget.
class ResourceError : public Error {
 public:
  ResourceError(const std::string& what, std::size_t required_bytes, std::size_t budget_bytes)
      : Error(what + " (requires " + std::to_string(required_bytes) + " bytes, budget " +
              std::to_string(budget_bytes) + " bytes)"),
        required_(required_bytes),
        budget_(budget_bytes) {}

  std::size_t required_bytes() const noexcept { return required_; }
  std::size_t budget_bytes() const noexcept { return budget_; }

 private:
  std::size_t required_;
  std::size_t budget_;
};

/// A persisted file is malformed or written by an incompatible version.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypersens
