#include "gram/estimation.hpp"

#include <cmath>
#include <string>

#include "gram/errors.hpp"
#include "gram/exact.hpp"

namespace gram {

Spectrum estimator_spectrum(const NoiseModel& noise, int m) {
  std::vector<double> thetas(noise.eigenvalues.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    if (!(noise.eigenvalues[k] > 0.0))
      throw NotPositiveDefinite("noise eigenvalues must be positive");
    thetas[k] = 1.0 / noise.eigenvalues[k];
  }
  return make_spectrum(thetas, m);
}

double blue_mse(const NoiseModel& noise, int m) {
  ExactEngine engine = build_engine(estimator_spectrum(noise, m));
  return m * inverse_moment(engine, 1);
}

SeriesValue lmmse_mse_high_snr(const NoiseModel& noise, int m,
                               double sigma_x2, int terms) {
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2))
    throw DomainError("signal power must be positive and finite");
  if (terms < 0) throw OrderOutOfRange("term count must be nonnegative");
  ExactEngine engine = build_engine(estimator_spectrum(noise, m));
  if (terms > engine.p - 1)
    throw OrderOutOfRange("high-power series supports at most p-1 = " +
                          std::to_string(engine.p - 1) + " terms, got " +
                          std::to_string(terms));
  SeriesValue out;
  double scale = static_cast<double>(m);
  for (int k = 0; k <= terms; ++k) {
    double sign = (k % 2) ? -1.0 : 1.0;
    out.last_term =
        scale * sign * std::pow(sigma_x2, -k) * inverse_moment(engine, k + 1);
    out.value += out.last_term;
  }
  return out;
}

SeriesValue lmmse_mse_low_snr(const NoiseModel& noise, int m, double sigma_x2,
                              int terms) {
  if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2))
    throw DomainError("signal power must be positive and finite");
  if (terms < 0) throw OrderOutOfRange("term count must be nonnegative");
  ExactEngine engine = build_engine(estimator_spectrum(noise, m));
  double scale = static_cast<double>(m);
  std::vector<double> series(terms + 1);
  for (int k = 0; k <= terms; ++k) {
    double sign = (k % 2) ? -1.0 : 1.0;
    series[k] = scale * sign * std::pow(sigma_x2, k + 1) *
                positive_moment(engine, k);
  }
  if (terms > 0 &&
      std::abs(series[terms]) >= std::abs(series[terms - 1]))
    throw ConvergenceWarning(
        "low-power series terms stopped shrinking: |t_" +
        std::to_string(terms) + "| = " +
        std::to_string(std::abs(series[terms])) + " >= |t_" +
        std::to_string(terms - 1) + "| = " +
        std::to_string(std::abs(series[terms - 1])) +
        "; the expansion is outside its radius");
  SeriesValue out;
  for (double term : series) out.value += term;
  out.last_term = series[terms];
  return out;
}

}  // namespace gram
