#pragma once

#include <stdexcept>
#include <string>

namespace opineq {

/// Base of every error raised by the library. Each subclass names one
/// precondition family so callers (and the CLI) can branch on type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define OPINEQ_DEFINE_ERROR(Name)          \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

OPINEQ_DEFINE_ERROR(InvalidMatrix);
OPINEQ_DEFINE_ERROR(ShapeError);
OPINEQ_DEFINE_ERROR(NotPositiveDefinite);
OPINEQ_DEFINE_ERROR(UnknownFunction);
OPINEQ_DEFINE_ERROR(BadParameter);
OPINEQ_DEFINE_ERROR(NonPositiveFunction);
OPINEQ_DEFINE_ERROR(NonPositiveConstant);
OPINEQ_DEFINE_ERROR(SpectrumNotEnclosed);
OPINEQ_DEFINE_ERROR(DegenerateInterval);
OPINEQ_DEFINE_ERROR(NotStrictlyConvex);
OPINEQ_DEFINE_ERROR(SandwichViolated);

#undef OPINEQ_DEFINE_ERROR

/// An eigenvalue (or scalar argument) fell outside a function's domain.
class DomainViolation : public Error {
 public:
  DomainViolation(const std::string& what, double offending)
      : Error(what + " (offending value " + std::to_string(offending) + ")"),
        offending_(offending) {}

  double offending() const noexcept { return offending_; }

 private:
  double offending_;
};

}  // namespace opineq
