#pragma once

#include <stdexcept>
#include <string>

namespace mpscap {

// Base of every exception thrown by the core library. The C API maps each
// subclass onto a distinct status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (g >= 1, k >= d, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Shape mismatch between matrices, Kraus lists, states or tables.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// A model whose purity/invariance residuals exceed tolerance.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  double last_residual() const noexcept { return last_residual_; }

 private:
  double last_residual_;
};

// Requested object would not fit (tensor dimension, enumeration size).
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpscap
