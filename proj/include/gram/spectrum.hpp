#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace gram {

// Eigenvalue spectrum of the correlation matrix Lambda, with the Gram
// dimension m attached. thetas are ascending, strictly positive, pairwise
// distinct; 1 <= m < n.
struct Spectrum {
  std::vector<double> thetas;
  int m = 0;

  int n() const { return static_cast<int>(thetas.size()); }
  // Largest inverse-moment order with a finite closed form.
  int p() const { return std::min(m, n() - m); }
  double theta_min() const { return thetas.front(); }
  double theta_max() const { return thetas.back(); }
  // Smallest adjacent gap relative to the largest eigenvalue.
  double min_relative_gap() const;
};

// Sorts and validates. Throws NotPositiveDefinite for nonpositive entries,
// RepeatedEigenvalues for exact duplicates, DimensionError for bad m/n.
Spectrum make_spectrum(std::vector<double> thetas, int m);

// Multiplies every eigenvalue by c > 0.
Spectrum scale_spectrum(const Spectrum& s, double c);

enum class MatrixModel { bessel, shifted_wishart, user };

struct CorrelationMatrix {
  Eigen::MatrixXcd entries;
  MatrixModel model = MatrixModel::user;
};

// Scattering correlation model: entries J0(pi |i-j|^2), unit diagonal,
// real symmetric Toeplitz. Positive definiteness is a property of n and is
// checked at spectrum extraction, not here.
CorrelationMatrix bessel_scattering_matrix(int n);

// I + W^* W with W an n x n matrix of iid CN(0,1) entries drawn from the
// counter-based generator, so the matrix is a pure function of (n, seed).
// Always Hermitian positive definite with eigenvalues >= 1.
CorrelationMatrix shifted_wishart_matrix(int n, std::uint64_t seed);

// Hermitian check (1e-12 relative), eigendecomposition, positivity and
// adjacent-gap screening (gap_tol relative to the largest eigenvalue).
Spectrum spectrum_from_matrix(const CorrelationMatrix& c, int m,
                              double gap_tol = 1e-8);

}  // namespace gram
