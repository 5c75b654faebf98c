#pragma once

#include <stdexcept>
#include <string>

namespace gram {

// Exit-code categories used by the CLI: validation -> 2, conditioning -> 3,
// convergence -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ConditioningError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

#define GRAM_DEFINE_ERROR(name, base)          \
  class name : public base {                   \
   public:                                     \
    explicit name(const std::string& msg)      \
        : base(#name ": " + msg) {}            \
  }

GRAM_DEFINE_ERROR(NotPositiveDefinite, ValidationError);
GRAM_DEFINE_ERROR(RepeatedEigenvalues, ValidationError);
GRAM_DEFINE_ERROR(DimensionError, ValidationError);
GRAM_DEFINE_ERROR(DomainError, ValidationError);
GRAM_DEFINE_ERROR(OrderOutOfRange, ValidationError);
GRAM_DEFINE_ERROR(EmptyGrid, ValidationError);
GRAM_DEFINE_ERROR(MissingDerivatives, ValidationError);

GRAM_DEFINE_ERROR(IllConditioned, ConditioningError);
GRAM_DEFINE_ERROR(SingularSample, ConditioningError);
GRAM_DEFINE_ERROR(DegenerateCoefficient, ConditioningError);
GRAM_DEFINE_ERROR(AllRejected, ConditioningError);

GRAM_DEFINE_ERROR(NoConvergence, ConvergenceError);
GRAM_DEFINE_ERROR(ConvergenceWarning, ConvergenceError);

#undef GRAM_DEFINE_ERROR

}  // namespace gram
