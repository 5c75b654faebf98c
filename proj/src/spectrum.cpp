#include "gram/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gram/errors.hpp"
#include "gram/philox.hpp"
#include "gram/special.hpp"

namespace gram {

double Spectrum::min_relative_gap() const {
  double g = std::numeric_limits<double>::infinity();
  for (size_t i = 1; i < thetas.size(); ++i)
    g = std::min(g, thetas[i] - thetas[i - 1]);
  return g / thetas.back();
}

Spectrum make_spectrum(std::vector<double> thetas, int m) {
  int n = static_cast<int>(thetas.size());
  if (n < 2) throw DimensionError("need at least 2 eigenvalues, got " +
                                  std::to_string(n));
  if (m < 1 || m >= n)
    throw DimensionError("m must satisfy 1 <= m < n, got m=" +
                         std::to_string(m) + ", n=" + std::to_string(n));
  std::sort(thetas.begin(), thetas.end());
  if (!(thetas.front() > 0.0) || !std::isfinite(thetas.back()))
    throw NotPositiveDefinite("eigenvalues must be finite and positive");
  for (int i = 1; i < n; ++i)
    if (thetas[i] == thetas[i - 1])
      throw RepeatedEigenvalues("duplicate eigenvalue " +
                                std::to_string(thetas[i]));
  return Spectrum{std::move(thetas), m};
}

Spectrum scale_spectrum(const Spectrum& s, double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("scale factor must be positive, got " +
                      std::to_string(c));
  std::vector<double> t = s.thetas;
  for (double& v : t) v *= c;
  return make_spectrum(std::move(t), s.m);
}

CorrelationMatrix bessel_scattering_matrix(int n) {
  if (n < 2) throw DimensionError("bessel model needs n >= 2");
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double d = static_cast<double>(i - j);
      a(i, j) = bessel_j0(M_PI * d * d);
    }
  return {std::move(a), MatrixModel::bessel};
}

CorrelationMatrix shifted_wishart_matrix(int n, std::uint64_t seed) {
  if (n < 2) throw DimensionError("shifted wishart model needs n >= 2");
  Eigen::MatrixXcd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w(i, j) = complex_gaussian(seed, 0, 0,
                                 static_cast<std::uint64_t>(i) * n + j);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(n, n) + w.adjoint() * w;
  return {std::move(a), MatrixModel::shifted_wishart};
}

Spectrum spectrum_from_matrix(const CorrelationMatrix& c, int m,
                              double gap_tol) {
  const Eigen::MatrixXcd& a = c.entries;
  int n = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw DimensionError("matrix must be square");
  if (m < 1 || m >= n)
    throw DimensionError("m must satisfy 1 <= m < n, got m=" +
                         std::to_string(m) + ", n=" + std::to_string(n));
  double scale = a.norm();
  if ((a - a.adjoint()).norm() > 1e-12 * scale)
    throw DomainError("matrix is not Hermitian to 1e-12 relative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a,
                                                     Eigen::EigenvaluesOnly);
  Eigen::VectorXd ev = es.eigenvalues();  // ascending
  if (!(ev(0) > 0.0))
    throw NotPositiveDefinite("smallest eigenvalue " + std::to_string(ev(0)));
  for (int i = 1; i < n; ++i)
    if (ev(i) - ev(i - 1) < gap_tol * ev(n - 1))
      throw RepeatedEigenvalues(
          "adjacent eigenvalue gap " + std::to_string(ev(i) - ev(i - 1)) +
          " below tolerance " + std::to_string(gap_tol * ev(n - 1)));
  return make_spectrum(std::vector<double>(ev.data(), ev.data() + n), m);
}

}  // namespace gram
