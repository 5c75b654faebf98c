#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "gram/spectrum.hpp"

namespace gram {

struct MomentEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
  int order = 0;
};

// One draw of the m x m Gram matrix S = H^* diag(theta) H with H having iid
// standard complex Gaussian entries.  The (seed, trial) pair fully determines
// the draw through a counter-based generator, so trials are reproducible and
// order-independent.
Eigen::MatrixXcd sample_gram(const Spectrum& spectrum, std::uint64_t seed,
                             long trial);

// Empirical estimate of the r-th normalized moment (1/m) E tr(S^r).  r may be
// negative; inverse powers go through a per-trial conditioning check and a
// Cholesky solve.  Throws SingularSample when a draw is numerically singular.
MomentEstimate mc_empirical_moment(const Spectrum& spectrum, int r,
                                   long trials, std::uint64_t seed);

// Estimation-error metrics simulated from their defining linear models.  The
// noise covariance enters only through its eigenvalues sigma_z (unitary
// invariance of the Gaussian ensemble).
struct BlueMetric {
  std::vector<double> sigma_z;  // noise covariance eigenvalues, n of them
  int m = 0;                    // signal dimension
};

struct LmmseMetric {
  std::vector<double> sigma_z;
  int m = 0;
  double sigma_x2 = 1.0;  // prior signal power per component
};

// Exponentially weighted sample-covariance whitened inversion loss
// E |R^{1/2} Rhat^{-1} R^{1/2} - I|_F^2 from n snapshots of an m-variate
// CN(0, R) source.  correlation defaults to the identity; the whitened loss
// is invariant to it, which tests exploit.
struct ScmMetric {
  int m = 0;
  int n = 0;
  double lambda = 0.5;  // forgetting factor in (0, 1)
  std::optional<Eigen::MatrixXcd> correlation;
};

using MetricParams = std::variant<BlueMetric, LmmseMetric, ScmMetric>;

MomentEstimate mc_application_metric(const MetricParams& params, long trials,
                                     std::uint64_t seed);

}  // namespace gram
