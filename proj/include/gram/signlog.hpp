#pragma once

#include <cmath>
#include <limits>

namespace gram {

// value = sign * exp(log); sign in {-1, 0, +1}. Keeps products of widely
// scaled factors representable where the raw doubles would over/underflow.
struct SignLog {
  double sign = 0.0;
  double log = -std::numeric_limits<double>::infinity();

  static SignLog from(double v) {
    if (v == 0.0) return {};
    return {v > 0.0 ? 1.0 : -1.0, std::log(std::fabs(v))};
  }

  double value() const { return sign == 0.0 ? 0.0 : sign * std::exp(log); }

  SignLog operator*(const SignLog& o) const {
    if (sign == 0.0 || o.sign == 0.0) return {};
    return {sign * o.sign, log + o.log};
  }
};

}  // namespace gram
