#include "gram/scm.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "gram/errors.hpp"
#include "gram/exact.hpp"

namespace gram {

Spectrum weight_spectrum(double lambda, int n, int m) {
  if (!(lambda > 0.0) || !(lambda < 1.0))
    throw DomainError("forgetting factor must lie in (0, 1), got " +
                      std::to_string(lambda));
  if (n < 2) throw DimensionError("need at least two snapshots");
  std::vector<double> thetas(n);
  double acc = 1.0 - lambda;
  for (int k = n - 1; k >= 0; --k) {
    thetas[k] = acc;
    acc *= lambda;
  }
  return make_spectrum(thetas, m);
}

double scm_loss(int m, int n, double lambda) {
  ExactEngine engine = build_engine(weight_spectrum(lambda, n, m));
  double mu1 = inverse_moment(engine, 1);
  double mu2 = inverse_moment(engine, 2);
  return m * (1.0 + mu2 - 2.0 * mu1);
}

LossCurve optimize_lambda(int m, int n, const std::vector<double>& grid) {
  if (grid.empty()) throw EmptyGrid("forgetting-factor grid is empty");
  for (double lam : grid)
    if (!(lam > 0.0) || !(lam < 1.0))
      throw DomainError("forgetting factor must lie in (0, 1), got " +
                        std::to_string(lam));

  const std::size_t count = grid.size();
  std::vector<double> vals(count, 0.0);
  std::vector<char> ok(count, 0);
  std::vector<std::exception_ptr> hard(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        vals[i] = scm_loss(m, n, grid[i]);
        ok[i] = 1;
      } catch (const ConditioningError&) {
        ok[i] = 0;
      } catch (...) {
        hard[i] = std::current_exception();
      }
    }
  };
  std::size_t workers = std::thread::hardware_concurrency();
  if (workers < 1) workers = 1;
  if (workers > count) workers = count;
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < count; ++i)
    if (hard[i]) std::rethrow_exception(hard[i]);

  LossCurve curve;
  for (std::size_t i = 0; i < count; ++i) {
    if (!ok[i]) {
      curve.rejected.push_back(grid[i]);
      continue;
    }
    curve.lambdas.push_back(grid[i]);
    curve.losses.push_back(vals[i]);
  }
  if (curve.lambdas.empty())
    throw AllRejected("no grid point is within numerical reach for m=" +
                      std::to_string(m) + " n=" + std::to_string(n));
  std::size_t best = 0;
  for (std::size_t i = 1; i < curve.losses.size(); ++i)
    if (curve.losses[i] < curve.losses[best]) best = i;
  curve.lambda_star = curve.lambdas[best];
  curve.loss_star = curve.losses[best];
  return curve;
}

std::vector<double> lambda_grid() {
  std::vector<double> grid;
  for (int k = 1; k <= 19; ++k) grid.push_back(0.05 * k);
  return grid;
}

}  // namespace gram
