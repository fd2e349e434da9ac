#pragma once

#include <stdexcept>
#include <string>

namespace logschro {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments: size mismatches, exponents out of range, malformed graphs.
class ValidationError : public Error
{
public:
  using Error::Error;
};

/// A potential violates inf V > -1 (or a class-specific hypothesis).
class AdmissibilityError : public Error
{
public:
  AdmissibilityError(const std::string& what, double infimum)
      : Error(what), infimum_(infimum)
  {}

  double infimum() const noexcept { return infimum_; }

private:
  double infimum_;
};

/// A check or solver was called outside its precondition.
class PreconditionError : public Error
{
public:
  using Error::Error;
};

/// A numerical procedure could not complete (singular solve, unconverged level).
class SolverError : public Error
{
public:
  using Error::Error;
};

}  // namespace logschro
