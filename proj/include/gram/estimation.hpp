#pragma once

#include <vector>

#include "gram/spectrum.hpp"

namespace gram {

// Noise covariance given by its eigenvalue spectrum.  Predictions depend on
// the covariance only through these values.
struct NoiseModel {
  std::vector<double> eigenvalues;
};

// The weighting matrix spectrum seen by the estimators is the reciprocal
// noise spectrum; m is the signal dimension.
Spectrum estimator_spectrum(const NoiseModel& noise, int m);

// Exact mean squared error of the best linear unbiased estimator,
// m * mu(-1) on the reciprocal spectrum.
double blue_mse(const NoiseModel& noise, int m);

struct SeriesValue {
  double value = 0.0;
  double last_term = 0.0;  // final summand, a truncation-error proxy
};

// LMMSE error expansions in the signal power sigma_x2.  The high-power series
// sums terms (-1)^k sigma_x2^{-k} mu(-k-1) for k = 0..terms and is valid for
// terms <= p-1; the low-power series sums (-1)^k sigma_x2^{k+1} mu(k) and
// throws ConvergenceWarning when the terms stop shrinking.
SeriesValue lmmse_mse_high_snr(const NoiseModel& noise, int m,
                               double sigma_x2, int terms);
SeriesValue lmmse_mse_low_snr(const NoiseModel& noise, int m, double sigma_x2,
                              int terms);

}  // namespace gram
