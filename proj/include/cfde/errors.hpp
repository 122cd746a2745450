#ifndef CFDE_ERRORS_HPP
#define CFDE_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cfde {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte position of the fault.
class ParseError : public Error
{
public:
  ParseError(std::size_t offset, const std::string& message)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message)
    , offset_(offset)
    , message_(message)
  {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& message() const noexcept { return message_; }

private:
  std::size_t offset_;
  std::string message_;
};

/// Argument outside the domain of an operation (t <= 0, ln of a non-positive
/// number, alpha outside (0,1], point outside a trajectory, ...).
class DomainError : public Error
{
public:
  using Error::Error;
};

/// A limit or finite-difference ladder that did not settle.
class ConvergenceError : public Error
{
public:
  using Error::Error;
};

class QuadratureError : public Error
{
public:
  using Error::Error;
};

class StepUnderflowError : public Error
{
public:
  using Error::Error;
};

/// Linear system whose matrix is numerically singular.
class SingularSystemError : public Error
{
public:
  using Error::Error;
};

/// A freshly built fundamental set whose Wronskian at t0 is not 1.
class FundamentalityError : public Error
{
public:
  using Error::Error;
};

/// Caller violated an operation contract (wrong sizes, wrong problem kind).
class PreconditionError : public Error
{
public:
  using Error::Error;
};

} // namespace cfde

#endif // CFDE_ERRORS_HPP
