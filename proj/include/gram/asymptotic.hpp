#pragma once

#include <vector>

#include "gram/spectrum.hpp"

namespace gram {

// Large-dimension deterministic equivalent for the inverse-moment sequence.
//
// m0 is the unique positive root of
//   x = m / sum_k( theta_k / (1 + theta_k * x) ),
// the Stieltjes-transform value of the limiting measure at the origin.  The
// derivative stack m_derivs extends it through a closed recursion in the
// auxiliary per-eigenvalue sequence f_derivs, where
// f_derivs[k][0] = -1 / (1 + theta_k * m0) lies in (-1, 0).  The r-th inverse
// moment is then approximated by m_derivs[r-2] / ((r-1)! * m^r), with m0
// standing in at r = 1.
struct AsymptoticState {
  std::vector<double> thetas;
  int n = 0;
  int m = 0;
  double m0 = 0.0;
  double residual = 0.0;                      // |m0 - F(m0)| at convergence
  std::vector<double> m_derivs;               // derivative p at index p-1
  std::vector<std::vector<double>> f_derivs;  // f_derivs[k][p], p = 0..P

  int max_order() const { return static_cast<int>(m_derivs.size()); }
};

// Solves the fixed point by damped iteration x <- (1-d)x + d F(x), d = 1/2,
// from x0 = n / sum(theta).  Returns a state with an empty derivative stack.
// Accepts the raw eigenvalue multiset: repeated eigenvalues are fine here,
// only positivity and finiteness are required.
AsymptoticState solve_fixed_point(const std::vector<double>& thetas, int m,
                                  double tol = 1e-13,
                                  int max_iter = 100000);
AsymptoticState solve_fixed_point(const Spectrum& spectrum,
                                  double tol = 1e-13,
                                  int max_iter = 100000);

// Extends the derivative stack through order P.  Each step solves one linear
// relation for the next m derivative, then updates every f derivative; the
// loop order matters, the recursion is sequential in p.
AsymptoticState compute_derivatives(AsymptoticState state, int order);

// Approximation to the r-th inverse moment, r >= 1.  Requires the state to
// hold derivatives up to order r-1.
double asymptotic_inverse_moment(const AsymptoticState& state, int r);

}  // namespace gram
