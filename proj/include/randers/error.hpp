#ifndef RANDERS_ERROR_HPP
#define RANDERS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace randers {

enum class ErrorKind {
  DimensionMismatch,
  NotInAlgebra,
  NotAntiHermitian,
  ConstraintViolation,
  ZeroVector,
  InvalidMetric,
  NotPositiveDefinite,
  Precondition,
  Parse,
};

inline const char* to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "dimension mismatch";
    case ErrorKind::NotInAlgebra: return "not in algebra span";
    case ErrorKind::NotAntiHermitian: return "not anti-Hermitian";
    case ErrorKind::ConstraintViolation: return "constraint violation";
    case ErrorKind::ZeroVector: return "zero vector";
    case ErrorKind::InvalidMetric: return "invalid metric";
    case ErrorKind::NotPositiveDefinite: return "not positive definite";
    case ErrorKind::Precondition: return "precondition failed";
    case ErrorKind::Parse: return "parse error";
  }
  return "unknown";
}

/// Library-wide exception. The kind lets callers (the CLI, tests) branch
/// without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace randers

#endif  // RANDERS_ERROR_HPP
