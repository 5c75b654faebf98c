#pragma once

#include <vector>

#include "gram/spectrum.hpp"

namespace gram {

// Effective weighting spectrum of the exponentially weighted sample
// covariance over n snapshots: theta_k = (1 - lambda) * lambda^{n-k},
// k = 1..n, in ascending order.
Spectrum weight_spectrum(double lambda, int n, int m);

// Predicted whitened inversion loss E |R^{1/2} Rhat^{-1} R^{1/2} - I|_F^2
// = m (1 + mu(-2) - 2 mu(-1)) on the weight spectrum.  Independent of the
// true covariance R.
double scm_loss(int m, int n, double lambda);

struct LossCurve {
  std::vector<double> lambdas;   // grid points that evaluated
  std::vector<double> losses;    // matching predicted losses
  std::vector<double> rejected;  // grid points outside numerical reach
  double lambda_star = 0.0;
  double loss_star = 0.0;
};

// Evaluates the loss over the grid (concurrently; results are merged in grid
// order) and returns the minimizer.  Ties resolve to the smaller lambda.
LossCurve optimize_lambda(int m, int n, const std::vector<double>& grid);

// Default grid 0.05, 0.10, ..., 0.95.
std::vector<double> lambda_grid();

}  // namespace gram
