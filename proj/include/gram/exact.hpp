#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gram/signlog.hpp"
#include "gram/spectrum.hpp"

namespace gram {

// Precomputed state for the closed-form moment evaluations of S = H* Lambda H
// with H n x m iid CN(0,1). Everything downstream is a pure function of this.
//
// The bilinear contractions through Psi^{-1} are evaluated as scaled divided
// differences (they are interpolation errors), and the cofactors of C come
// from its exact factorization C = diag(px) * V * A * diag((k-1)!), where V is
// the Vandermonde matrix in the top-m eigenvalues and A is unit upper
// triangular in complete homogeneous symmetric polynomials. That turns det(C)
// into a pure product and each cofactor into a same-sign sum, so the
// cancellation left sits in the divided differences and in the outer cofactor
// contractions; both are measured into one bound (probe_cond) that gates
// acceptance.
struct ExactEngine {
  Spectrum spectrum;
  int n = 0, m = 0, nm = 0, p = 0;  // nm = n - m

  // diagnostics
  Eigen::MatrixXd psi;      // Vandermonde block, [psi]_{i,j} = theta_i^{j-1}
  Eigen::MatrixXd psi_inv;  // LU solve against identity
  double psi_cond = 0.0;    // 1-norm condition estimate
  double probe_cond = 0.0;  // measured cancellation / eps, all stages
  bool clustered = false;   // Taylor-series branch for tight clusters
  Eigen::MatrixXd cmat;     // C matrix (may overflow for extreme spectra)
  double det_c = 0.0;
  Eigen::MatrixXd cofactor;  // materialized cofactor matrix of C

  // authoritative factors, sign+log
  double log_l = 0.0;      // positive prefactor L
  double log_det_c = 0.0;  // det C > 0
  Eigen::VectorXd log_px;  // log prod_u (x_i - theta_u)
  std::vector<std::vector<SignLog>> cof;  // [i][j], m x m
  std::vector<std::vector<SignLog>> dd;   // [i][d-(nm-p)], DD[t^d log t]
  std::vector<std::vector<SignLog>> lag;  // [i][q], Lagrange weights l_q(x_i)
};

// Validates conditioning and precomputes the tables above. Throws
// IllConditioned when the spectrum's moments are not reliably computable in
// double precision (near-repeated eigenvalues, dynamic range beyond double,
// or measured cancellation above 1e12 * eps).
ExactEngine build_engine(const Spectrum& s);

// Mellin transform M(s) of the empirical eigenvalue density of S, s > 0.
// M(r+1) = mu(r) for integer r >= 0.
double mellin(const ExactEngine& e, double s);

// mu(r) = (1/m) E Tr S^r for r >= 0 (mu(0) = 1).
double positive_moment(const ExactEngine& e, int r);

// mu(-r) for 1 <= r <= p, closed form.
double inverse_moment(const ExactEngine& e, int r);

// Evaluates the analytically continued M(s - r + 1) at each s in svec,
// svec in (0, 0.05]. The sequence approaches inverse_moment(e, r) as s -> 0.
std::vector<double> mellin_continuation_check(const ExactEngine& e, int r,
                                        const std::vector<double>& svec);

// Partial continuation sum over the terms j >= r+1 only; vanishes in the
// s -> 0 limit through the cofactor identity, so its size at small s is a
// direct cancellation diagnostic.
double continuation_tail(const ExactEngine& e, int r, double s);

}  // namespace gram
