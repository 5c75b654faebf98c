#include <cmath>
#include <vector>

#include "doctest.h"
#include "gram/asymptotic.hpp"
#include "gram/errors.hpp"
#include "gram/exact.hpp"
#include "gram/spectrum.hpp"
#include "support.hpp"

using gram::asymptotic_inverse_moment;
using gram::compute_derivatives;
using gram::solve_fixed_point;

TEST_CASE("identity spectrum solves in closed form") {
  // x = m(1+x)/n  =>  m0 = m/(n-m)
  auto st = solve_fixed_point(std::vector<double>(10, 1.0), 3, 1e-14);
  CHECK_REL(st.m0, 3.0 / 7.0, 1e-12);
  CHECK(st.residual <= 1e-14);
  CHECK(st.max_order() == 0);
  for (const auto& f : st.f_derivs) {
    REQUIRE(f.size() == 1);
    CHECK_REL(f[0], -0.7, 1e-12);
  }

  auto scaled = solve_fixed_point(std::vector<double>(10, 2.0), 3, 1e-14);
  CHECK_REL(scaled.m0, 3.0 / 14.0, 1e-12);
}

TEST_CASE("identity derivative stack matches the closed recursion values") {
  auto st = compute_derivatives(
      solve_fixed_point(std::vector<double>(10, 1.0), 3, 1e-14), 3);
  REQUIRE(st.max_order() == 3);
  CHECK_REL(st.m_derivs[0], 90.0 / 343.0, 1e-10);
  CHECK_REL(st.m_derivs[1], 7020.0 / 16807.0, 1e-10);
  for (const auto& f : st.f_derivs) {
    REQUIRE(f.size() == 4);
    CHECK_REL(f[1], 9.0 / 70.0, 1e-10);  // theta m^(1) g^2 with g = 7/10
  }

  CHECK_REL(asymptotic_inverse_moment(st, 1), 1.0 / 7.0, 1e-12);
  CHECK_REL(asymptotic_inverse_moment(st, 2), 10.0 / 343.0, 1e-12);
  CHECK_REL(asymptotic_inverse_moment(st, 3), 0.0077348723746058190, 1e-10);
}

TEST_CASE("fixed point on a spread spectrum") {
  auto st = solve_fixed_point({1, 2, 3, 4, 5}, 2, 1e-14);
  CHECK_REL(st.m0, 0.24614183728450543, 1e-12);
  CHECK(st.residual <= 1e-14);

  st = compute_derivatives(std::move(st), 1);
  CHECK_REL(st.m_derivs[0], 0.10807124163447101, 1e-10);
  CHECK_REL(asymptotic_inverse_moment(st, 1), 0.12307091864225272, 1e-10);
  CHECK_REL(asymptotic_inverse_moment(st, 2), 0.027017810408617752, 1e-10);
}

TEST_CASE("spectrum overload matches the raw overload") {
  auto sp = gram::make_spectrum({1, 2, 3, 4, 5}, 2);
  auto a = solve_fixed_point(sp);
  auto b = solve_fixed_point(sp.thetas, sp.m);
  CHECK(a.m0 == b.m0);
  CHECK(a.n == 5);
  CHECK(a.m == 2);
}

TEST_CASE("staged derivative extension equals a direct pass") {
  auto base = solve_fixed_point({1, 2, 3, 4, 5}, 2, 1e-14);
  auto direct = compute_derivatives(base, 3);
  auto staged = compute_derivatives(compute_derivatives(base, 1), 3);
  REQUIRE(direct.max_order() == 3);
  REQUIRE(staged.max_order() == 3);
  for (int i = 0; i < 3; ++i)
    CHECK(direct.m_derivs[i] == staged.m_derivs[i]);
  // asking for an already-covered order is a no-op
  auto same = compute_derivatives(direct, 2);
  CHECK(same.max_order() == 3);
}

TEST_CASE("asymptotic moments scale covariantly") {
  auto a = compute_derivatives(solve_fixed_point({1, 2, 3, 4, 5}, 2), 2);
  std::vector<double> doubled = {2, 4, 6, 8, 10};
  auto b = compute_derivatives(solve_fixed_point(doubled, 2), 2);
  for (int r = 1; r <= 3; ++r)
    CHECK_REL(asymptotic_inverse_moment(b, r),
              asymptotic_inverse_moment(a, r) / std::pow(2.0, r), 1e-10);
}

TEST_CASE("f derivatives start inside (-1, 0)") {
  for (std::uint64_t key : {61u, 62u, 63u}) {
    auto cs = testsupport::random_case(key);
    auto st = solve_fixed_point(cs.sp);
    for (const auto& f : st.f_derivs) {
      CHECK(f[0] > -1.0);
      CHECK(f[0] < 0.0);
    }
  }
}

TEST_CASE("approximation error shrinks as dimensions grow proportionally") {
  // theta_i = 1.3^(i-1) profile at (m, n) = (3k, 10k)
  double prev_gap = 1.0;
  std::vector<double> expected = {0.0037894356, 0.0033962021, 0.0029920112};
  int idx = 0;
  for (int k : {1, 2, 4}) {
    int m = 3 * k, n = 10 * k;
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i) th[i] = std::pow(1.3, i);
    double exact =
        gram::inverse_moment(gram::build_engine(gram::make_spectrum(th, m)), 1);
    double asym =
        asymptotic_inverse_moment(solve_fixed_point(th, m, 1e-14), 1);
    double gap = std::abs(asym - exact) / exact;
    CHECK(gap < prev_gap);
    CHECK(std::abs(gap - expected[idx]) < 1e-6);
    prev_gap = gap;
    ++idx;
  }
}

TEST_CASE("scattering spectrum n=7: close at first order, rough at second") {
  auto sp = gram::spectrum_from_matrix(gram::bessel_scattering_matrix(7), 3);
  auto e = gram::build_engine(sp);
  auto st = compute_derivatives(solve_fixed_point(sp), 1);
  CHECK_REL(asymptotic_inverse_moment(st, 1), 0.27118854671316318, 1e-9);
  CHECK_REL(asymptotic_inverse_moment(st, 2), 0.13390072754255436, 1e-9);
  double gap1 = std::abs(asymptotic_inverse_moment(st, 1) -
                         gram::inverse_moment(e, 1)) /
                gram::inverse_moment(e, 1);
  double gap2 = std::abs(asymptotic_inverse_moment(st, 2) -
                         gram::inverse_moment(e, 2)) /
                gram::inverse_moment(e, 2);
  CHECK(gap1 < 0.01);
  CHECK(gap2 < 0.15);
}

TEST_CASE("solver validation and convergence reporting") {
  CHECK_THROWS_AS((void)solve_fixed_point({1.0}, 1), gram::DimensionError);
  CHECK_THROWS_AS((void)solve_fixed_point({1, 2, 3}, 3), gram::DimensionError);
  CHECK_THROWS_AS((void)solve_fixed_point({1, -2, 3}, 1),
                  gram::NotPositiveDefinite);
  CHECK_THROWS_AS((void)solve_fixed_point({1, 2, 3}, 1, 0.0),
                  gram::DomainError);
  CHECK_THROWS_AS((void)solve_fixed_point({1, 2, 3, 4, 5}, 2, 1e-14, 3),
                  gram::NoConvergence);
}

TEST_CASE("derivative and moment order validation") {
  auto st = solve_fixed_point({1, 2, 3, 4, 5}, 2);
  CHECK_THROWS_AS((void)compute_derivatives(st, -1), gram::OrderOutOfRange);
  CHECK_THROWS_AS((void)asymptotic_inverse_moment(st, 0),
                  gram::OrderOutOfRange);
  CHECK_REL(asymptotic_inverse_moment(st, 1), st.m0 / 2.0, 1e-15);
  CHECK_THROWS_AS((void)asymptotic_inverse_moment(st, 2),
                  gram::MissingDerivatives);
}
