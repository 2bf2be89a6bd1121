#pragma once

#include <stdexcept>
#include <string>

namespace dfcv {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// Invalid construction arguments: bad grid length, order out of range, etc.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// expression language

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("syntax error at offset " + std::to_string(offset) + ": " + what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownFunctionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnboundParameterError : public Error {
 public:
  using Error::Error;
};

// variational problems and solvers

class BoundaryMismatchError : public Error {
 public:
  using Error::Error;
};

class ConstraintError : public Error {
 public:
  using Error::Error;
};

class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

/// A solve that did not reach its tolerance where a converged result was required.
class NonConvergenceError : public Error {
 public:
  using Error::Error;
};

class DimensionTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace dfcv
