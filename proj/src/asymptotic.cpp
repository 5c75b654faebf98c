#include "gram/asymptotic.hpp"

#include <cmath>
#include <string>

#include "gram/errors.hpp"

namespace gram {

namespace {

constexpr double kDamping = 0.5;
constexpr double kCoefficientFloor = 1e-14;

double iterate(const std::vector<double>& thetas, int m, double x) {
  double denom = 0.0;
  for (double th : thetas) denom += th / (1.0 + th * x);
  return static_cast<double>(m) / denom;
}

std::vector<std::vector<double>> binomials(int pmax) {
  std::vector<std::vector<double>> c(pmax + 1);
  for (int p = 0; p <= pmax; ++p) {
    c[p].assign(p + 1, 1.0);
    for (int l = 1; l < p; ++l) c[p][l] = c[p - 1][l - 1] + c[p - 1][l];
  }
  return c;
}

}  // namespace

AsymptoticState solve_fixed_point(const std::vector<double>& thetas, int m,
                                  double tol, int max_iter) {
  const int n = static_cast<int>(thetas.size());
  if (n < 2 || m < 1 || m >= n)
    throw DimensionError("need n >= 2 eigenvalues and 1 <= m < n, got n=" +
                         std::to_string(n) + " m=" + std::to_string(m));
  for (double th : thetas)
    if (!(th > 0.0) || !std::isfinite(th))
      throw NotPositiveDefinite("eigenvalues must be positive and finite");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");

  double sum_theta = 0.0;
  for (double th : thetas) sum_theta += th;
  double x = static_cast<double>(n) / sum_theta;
  double res = 0.0;
  bool converged = false;
  for (int it = 0; it < max_iter; ++it) {
    double fx = iterate(thetas, m, x);
    res = std::abs(x - fx);
    if (res < tol) {
      converged = true;
      break;
    }
    x = (1.0 - kDamping) * x + kDamping * fx;
  }
  if (!converged)
    throw NoConvergence("fixed-point iteration stalled after " +
                        std::to_string(max_iter) + " steps, residual " +
                        std::to_string(res));

  AsymptoticState st;
  st.thetas = thetas;
  st.n = n;
  st.m = m;
  st.m0 = x;
  st.residual = res;
  st.f_derivs.assign(n, std::vector<double>(1, 0.0));
  for (int k = 0; k < n; ++k)
    st.f_derivs[k][0] = -1.0 / (1.0 + thetas[k] * x);
  return st;
}

AsymptoticState solve_fixed_point(const Spectrum& spectrum, double tol,
                                  int max_iter) {
  return solve_fixed_point(spectrum.thetas, spectrum.m, tol, max_iter);
}

AsymptoticState compute_derivatives(AsymptoticState state, int order) {
  if (order < 0) throw OrderOutOfRange("derivative order must be nonnegative");
  const int start = state.max_order();
  if (order <= start) return state;

  const int n = state.n;
  const double inv_m = 1.0 / static_cast<double>(state.m);
  std::vector<double> g(n);
  for (int k = 0; k < n; ++k) g[k] = -state.f_derivs[k][0];

  // Multiplier of the p-th derivative in the linear relation; independent
  // of p.
  double a_coef = 0.0;
  for (int k = 0; k < n; ++k)
    a_coef -= inv_m * state.thetas[k] * g[k] * g[k];
  if (std::abs(a_coef) < kCoefficientFloor)
    throw DegenerateCoefficient(
        "leading recursion coefficient is numerically zero (" +
        std::to_string(a_coef) + ")");

  state.m_derivs.resize(order);
  for (int k = 0; k < n; ++k) state.f_derivs[k].resize(order + 1, 0.0);

  auto binom = binomials(order);
  auto m_deriv = [&](int p) {
    return p == 0 ? state.m0 : state.m_derivs[p - 1];
  };
  for (int p = start + 1; p <= order; ++p) {
    double b_coef = 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 1; l < p; ++l)
        b_coef += inv_m * binom[p][l] * state.thetas[k] * m_deriv(l) *
                  state.f_derivs[k][p - l] * g[k];
    state.m_derivs[p - 1] = -(p * m_deriv(p - 1) + b_coef) / a_coef;
    for (int k = 0; k < n; ++k) {
      double f = state.thetas[k] * state.m_derivs[p - 1] * g[k] * g[k];
      for (int l = 1; l < p; ++l)
        f -= binom[p][l] * state.thetas[k] * m_deriv(l) *
             state.f_derivs[k][p - l] * g[k];
      state.f_derivs[k][p] = f;
    }
  }
  return state;
}

double asymptotic_inverse_moment(const AsymptoticState& state, int r) {
  if (r < 1) throw OrderOutOfRange("inverse-moment order must be >= 1");
  if (r - 1 > state.max_order())
    throw MissingDerivatives("order " + std::to_string(r) +
                             " needs derivatives up to " +
                             std::to_string(r - 1) + ", state holds " +
                             std::to_string(state.max_order()));
  double result = r == 1 ? state.m0 : state.m_derivs[r - 2];
  for (int k = 1; k < r; ++k) result /= static_cast<double>(k);
  for (int k = 0; k < r; ++k) result /= static_cast<double>(state.m);
  return result;
}

}  // namespace gram
