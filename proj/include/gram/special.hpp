#pragma once

#include "gram/signlog.hpp"

namespace gram {

// Bessel function of the first kind, order zero.
double bessel_j0(double x);

// Gamma(x) for real non-pole x, in sign+log form. Arguments at or left of
// the origin are lifted through the recurrence Gamma(x) = Gamma(x+K)/prod,
// which stays finite arbitrarily close to the poles. Throws DomainError when
// x is exactly a nonpositive integer.
SignLog gamma_signlog(double x);

// Convenience wrapper; may overflow to +-inf for large |log|.
double gamma_near_pole(double x);

}  // namespace gram
