#include <cmath>
#include <vector>

#include "doctest.h"
#include "gram/errors.hpp"
#include "gram/estimation.hpp"
#include "gram/exact.hpp"
#include "gram/oracle.hpp"
#include "gram/spectrum.hpp"
#include "support.hpp"

using gram::blue_mse;
using gram::estimator_spectrum;
using gram::lmmse_mse_high_snr;
using gram::lmmse_mse_low_snr;
using gram::NoiseModel;

namespace {

NoiseModel bessel_noise(int n) {
  auto sp = gram::spectrum_from_matrix(gram::bessel_scattering_matrix(n), 1);
  return NoiseModel{sp.thetas};
}

const NoiseModel kNoise{{1, 2, 3, 4, 5}};

}  // namespace

TEST_CASE("estimator spectrum is the sorted reciprocal noise spectrum") {
  auto sp = estimator_spectrum(kNoise, 2);
  REQUIRE(sp.n() == 5);
  CHECK(sp.m == 2);
  CHECK(sp.thetas[0] == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(sp.thetas[1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(sp.thetas[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(sp.thetas[3] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(sp.thetas[4] == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS((void)estimator_spectrum(NoiseModel{{1, -2, 3}}, 1),
                  gram::NotPositiveDefinite);
  CHECK_THROWS_AS((void)estimator_spectrum(kNoise, 5), gram::DimensionError);
}

TEST_CASE("blue error is m times the first inverse moment") {
  auto e = gram::build_engine(estimator_spectrum(kNoise, 2));
  CHECK_REL(blue_mse(kNoise, 2), 2.0 * gram::inverse_moment(e, 1), 1e-15);
}

TEST_CASE("blue error on the scattering noise model") {
  CHECK_REL(blue_mse(bessel_noise(10), 3), 0.37626152552770322, 1e-9);
}

TEST_CASE("blue error scales linearly in the noise power") {
  NoiseModel scaled{{3, 6, 9, 12, 15}};
  CHECK_REL(blue_mse(scaled, 2), 3.0 * blue_mse(kNoise, 2), 1e-12);
}

TEST_CASE("blue error on near-identity noise approaches m/(n-m)") {
  std::vector<double> ev(10);
  for (int i = 1; i <= 10; ++i) ev[i - 1] = 1.0 + i * 1e-4;
  CHECK_REL(blue_mse(NoiseModel{ev}, 3), 3.0 / 7.0, 2e-3);
}

TEST_CASE("high-power series terms compose the inverse moments") {
  auto e = gram::build_engine(estimator_spectrum(kNoise, 2));
  double mu1 = gram::inverse_moment(e, 1);
  double mu2 = gram::inverse_moment(e, 2);

  auto l0 = lmmse_mse_high_snr(kNoise, 2, 100.0, 0);
  CHECK_REL(l0.value, blue_mse(kNoise, 2), 1e-15);
  CHECK_REL(l0.last_term, 2.0 * mu1, 1e-15);

  auto l1 = lmmse_mse_high_snr(kNoise, 2, 100.0, 1);
  CHECK_REL(l1.value, 2.0 * (mu1 - mu2 / 100.0), 1e-12);
  CHECK_REL(l1.last_term, -2.0 * mu2 / 100.0, 1e-12);
  CHECK(l1.value < blue_mse(kNoise, 2));  // prior information helps

  // p = 2 on this spectrum, so terms stop at p - 1 = 1
  CHECK_THROWS_AS((void)lmmse_mse_high_snr(kNoise, 2, 100.0, 2),
                  gram::OrderOutOfRange);
  CHECK_THROWS_AS((void)lmmse_mse_high_snr(kNoise, 2, 100.0, -1),
                  gram::OrderOutOfRange);
  CHECK_THROWS_AS((void)lmmse_mse_high_snr(kNoise, 2, 0.0, 0),
                  gram::DomainError);
}

TEST_CASE("low-power series terms compose the positive moments") {
  auto e = gram::build_engine(estimator_spectrum(kNoise, 2));
  double t1 = gram::positive_moment(e, 1);  // = sum of reciprocal noise eigs

  auto k0 = lmmse_mse_low_snr(kNoise, 2, 0.01, 0);
  CHECK_REL(k0.value, 2.0 * 0.01, 1e-15);

  auto k1 = lmmse_mse_low_snr(kNoise, 2, 0.01, 1);
  CHECK_REL(k1.value, 2.0 * (0.01 - 1e-4 * t1), 1e-12);
  CHECK_REL(k1.last_term, -2.0 * 1e-4 * t1, 1e-12);

  CHECK_THROWS_AS((void)lmmse_mse_low_snr(kNoise, 2, 0.01, -1),
                  gram::OrderOutOfRange);
  CHECK_THROWS_AS((void)lmmse_mse_low_snr(kNoise, 2, -0.01, 0),
                  gram::DomainError);
}

TEST_CASE("low-power series rejects non-decaying expansions") {
  CHECK_THROWS_AS((void)lmmse_mse_low_snr(kNoise, 2, 10.0, 8),
                  gram::ConvergenceWarning);
}

TEST_CASE("high-power series brackets simulation at strong prior power") {
  auto noise = bessel_noise(10);
  for (double sx2 : {100.0, 1000.0}) {
    auto series = lmmse_mse_high_snr(noise, 3, sx2, 2);
    auto mc = gram::mc_application_metric(
        gram::LmmseMetric{noise.eigenvalues, 3, sx2}, 20000, 41);
    CHECK(std::abs(series.value - mc.mean) <=
          std::max(5.0 * mc.std_error, 0.005 * std::abs(mc.mean)));
  }
}

TEST_CASE("low-power series brackets simulation at weak prior power") {
  auto noise = bessel_noise(10);
  for (double sx2 : {0.01, 0.001}) {
    auto series = lmmse_mse_low_snr(noise, 3, sx2, 8);
    auto mc = gram::mc_application_metric(
        gram::LmmseMetric{noise.eigenvalues, 3, sx2}, 20000, 43);
    CHECK(std::abs(series.value - mc.mean) <=
          std::max(5.0 * mc.std_error, 0.005 * std::abs(mc.mean)));
  }
}
