#include "gram/special.hpp"

#include <cmath>

#include "gram/errors.hpp"

namespace gram {

double bessel_j0(double x) { return ::j0(x); }

SignLog gamma_signlog(double x) {
  if (x > 0.5) return {1.0, std::lgamma(x)};
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("gamma pole at " + std::to_string(x));
  // lift to the positive half line: Gamma(x) = Gamma(x+K) / prod_{i<K} (x+i)
  int K = static_cast<int>(std::ceil(0.5 - x)) + 1;
  double sign = 1.0;
  double log = std::lgamma(x + K);
  for (int i = 0; i < K; ++i) {
    double f = x + i;
    if (f < 0.0) sign = -sign;
    log -= std::log(std::fabs(f));
  }
  return {sign, log};
}

double gamma_near_pole(double x) { return gamma_signlog(x).value(); }

}  // namespace gram
