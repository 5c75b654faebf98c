#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "doctest.h"
#include "gram/exact.hpp"
#include "gram/oracle.hpp"
#include "gram/philox.hpp"
#include "gram/spectrum.hpp"

namespace testsupport {

// Relative comparison with an explicit bound; doctest's Approx mixes in an
// absolute unit scale, which is wrong for small-magnitude anchors.
#define CHECK_REL(got, want, tol)                                       \
  do {                                                                  \
    const double got_ = (got), want_ = (want), tol_ = (tol);            \
    CAPTURE(got_);                                                      \
    CAPTURE(want_);                                                     \
    CHECK(std::abs(got_ - want_) <= tol_ * std::abs(want_));            \
  } while (0)

// Deterministic uniform in [0,1), addressed by (key, index).
inline double uniform(std::uint64_t key, std::uint64_t index) {
  auto w = gram::Philox4x32::block(
      {static_cast<std::uint32_t>(index),
       static_cast<std::uint32_t>(index >> 32), 0u, 0u},
      {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
  std::uint64_t a =
      (static_cast<std::uint64_t>(w[1]) << 32) | static_cast<std::uint64_t>(w[0]);
  return static_cast<double>(a >> 11) * 0x1.0p-53;
}

struct SpectrumCase {
  gram::Spectrum sp;
  gram::ExactEngine engine;
};

// Random spectrum with measured conditioning below the given probe bound.
// Rejection keeps only cases the exact engine can evaluate reliably, so the
// property suites never compare against garbage digits.
inline SpectrumCase random_case(std::uint64_t key, int n_max = 10,
                                double probe_bound = 1e6) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    std::uint64_t base = key * 1000003ull + attempt * 7919ull + 1ull;
    int n = 2 + static_cast<int>(uniform(base, 0) * (n_max - 1));
    if (n > n_max) n = n_max;
    int m = 1 + static_cast<int>(uniform(base, 1) * (n - 1));
    if (m >= n) m = n - 1;
    double scale = std::exp((uniform(base, 2) - 0.5) * 4.0);
    std::vector<double> thetas(n);
    for (int i = 0; i < n; ++i)
      thetas[i] = scale * (0.2 + 3.0 * uniform(base, 10 + static_cast<std::uint64_t>(i)));
    try {
      gram::Spectrum sp = gram::make_spectrum(thetas, m);
      gram::ExactEngine engine = gram::build_engine(sp);
      if (engine.probe_cond < probe_bound) return {std::move(sp), std::move(engine)};
    } catch (const gram::Error&) {
    }
  }
}

inline double trace(const gram::Spectrum& sp) {
  double t = 0.0;
  for (double v : sp.thetas) t += v;
  return t;
}

// Gaussian quartic (Wick) identity: (1/m) E Tr S^2 = (Tr L)^2 + m Tr L^2.
inline double wick_second_moment(const gram::Spectrum& sp) {
  double t1 = 0.0, t2 = 0.0;
  for (double v : sp.thetas) {
    t1 += v;
    t2 += v * v;
  }
  return t1 * t1 + sp.m * t2;
}

// Monte Carlo Mellin transform (1/m) E sum_i lambda_i^{s-1} for non-integer s.
// Independent of the closed form: eigenvalues of sampled Gram matrices.
inline std::pair<double, double> mc_mellin(const gram::Spectrum& sp, double s,
                                           long trials, std::uint64_t seed) {
  double sum = 0.0, sumsq = 0.0;
  for (long t = 0; t < trials; ++t) {
    Eigen::MatrixXcd gram = gram::sample_gram(sp, seed, static_cast<std::uint64_t>(t));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram,
                                                       Eigen::EigenvaluesOnly);
    double v = 0.0;
    for (int i = 0; i < sp.m; ++i) v += std::pow(es.eigenvalues()(i), s - 1.0);
    v /= sp.m;
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / trials;
  double var = sumsq / trials - mean * mean;
  double se = std::sqrt(std::max(var, 0.0) / trials);
  return {mean, se};
}

}  // namespace testsupport
