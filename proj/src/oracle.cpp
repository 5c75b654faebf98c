#include "gram/oracle.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gram/errors.hpp"
#include "gram/philox.hpp"

namespace gram {

namespace {

// Trials are summed in fixed chunks and the chunk sums merged in index order,
// so results are bit-identical for any worker count.
constexpr long kChunkTrials = 1024;
constexpr double kSampleCondLimit = 1e14;

int worker_count(long chunks) {
  long w = std::thread::hardware_concurrency();
  if (w < 1) w = 1;
  if (const char* env = std::getenv("GRAM_MOMENTS_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) w = v;
  }
  if (w > chunks) w = chunks;
  return static_cast<int>(w);
}

template <typename TrialFn>
MomentEstimate run_chunked(long trials, std::uint64_t seed, int order,
                           TrialFn&& trial_fn) {
  if (trials < 1) throw DomainError("trial count must be >= 1");
  const long chunks = (trials + kChunkTrials - 1) / kChunkTrials;
  std::vector<std::pair<double, double>> partial(chunks, {0.0, 0.0});
  std::atomic<long> next_chunk{0};
  std::atomic<bool> stop{false};
  std::mutex bad_mutex;
  long bad_trial = -1;
  std::exception_ptr bad_ex;

  auto work = [&] {
    for (;;) {
      long c = next_chunk.fetch_add(1);
      if (c >= chunks || stop.load()) return;
      double sum = 0.0, sumsq = 0.0;
      long lo = c * kChunkTrials;
      long hi = std::min(trials, lo + kChunkTrials);
      for (long t = lo; t < hi; ++t) {
        try {
          double v = trial_fn(t);
          sum += v;
          sumsq += v * v;
        } catch (...) {
          std::lock_guard<std::mutex> lk(bad_mutex);
          if (bad_trial < 0 || t < bad_trial) {
            bad_trial = t;
            bad_ex = std::current_exception();
          }
          stop.store(true);
          return;
        }
      }
      partial[c] = {sum, sumsq};
    }
  };

  int workers = worker_count(chunks);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (bad_ex) std::rethrow_exception(bad_ex);

  double sum = 0.0, sumsq = 0.0;
  for (long c = 0; c < chunks; ++c) {
    sum += partial[c].first;
    sumsq += partial[c].second;
  }
  MomentEstimate est;
  est.mean = sum / static_cast<double>(trials);
  est.trials = trials;
  est.seed = seed;
  est.order = order;
  if (trials > 1) {
    double var = (sumsq - static_cast<double>(trials) * est.mean * est.mean) /
                 static_cast<double>(trials - 1);
    est.std_error = std::sqrt(std::max(var, 0.0) /
                              static_cast<double>(trials));
  }
  return est;
}

Eigen::MatrixXcd sample_rectangle(int n, int m, std::uint64_t seed,
                                  long trial) {
  Eigen::MatrixXcd h(n, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      h(i, j) = complex_gaussian(seed, static_cast<std::uint64_t>(trial), 0,
                                 static_cast<std::uint64_t>(i) * m + j);
  return h;
}

void check_invertible(const Eigen::MatrixXcd& s, long trial) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s,
                                                     Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues()(0);
  double hi = es.eigenvalues()(s.rows() - 1);
  if (!(lo > 0.0) || hi / lo > kSampleCondLimit)
    throw SingularSample("draw " + std::to_string(trial) +
                         " is numerically singular (condition ratio " +
                         std::to_string(hi / lo) + ")");
}

double power_trace(const Eigen::MatrixXcd& base, int power) {
  Eigen::MatrixXcd p = base;
  for (int k = 1; k < power; ++k) p = p * base;
  return p.trace().real();
}

std::vector<double> scm_weights(double lambda, int n) {
  std::vector<double> w(n);
  double acc = 1.0 - lambda;
  for (int k = n - 1; k >= 0; --k) {
    w[k] = acc;
    acc *= lambda;
  }
  return w;
}

void check_sigma_z(const std::vector<double>& sigma_z, int m) {
  const int n = static_cast<int>(sigma_z.size());
  if (n < 2 || m < 1 || m >= n)
    throw DimensionError("need n >= 2 noise eigenvalues and 1 <= m < n, "
                         "got n=" + std::to_string(n) +
                         " m=" + std::to_string(m));
  for (double s : sigma_z)
    if (!(s > 0.0) || !std::isfinite(s))
      throw NotPositiveDefinite("noise eigenvalues must be positive and "
                                "finite");
}

}  // namespace

Eigen::MatrixXcd sample_gram(const Spectrum& spectrum, std::uint64_t seed,
                             long trial) {
  const int n = spectrum.n(), m = spectrum.m;
  Eigen::MatrixXcd h = sample_rectangle(n, m, seed, trial);
  Eigen::VectorXd theta =
      Eigen::Map<const Eigen::VectorXd>(spectrum.thetas.data(), n);
  return h.adjoint() * theta.asDiagonal() * h;
}

MomentEstimate mc_empirical_moment(const Spectrum& spectrum, int r,
                                   long trials, std::uint64_t seed) {
  if (r == 0) {
    MomentEstimate est;
    est.mean = 1.0;
    est.trials = trials;
    est.seed = seed;
    return est;
  }
  if (r < 0 && -r > spectrum.p())
    throw OrderOutOfRange("inverse order " + std::to_string(-r) +
                          " exceeds p = " + std::to_string(spectrum.p()) +
                          "; the estimator has no finite mean there");
  const int m = spectrum.m;
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
  auto trial_fn = [&, r](long t) {
    Eigen::MatrixXcd s = sample_gram(spectrum, seed, t);
    if (r > 0) return power_trace(s, r) / m;
    check_invertible(s, t);
    Eigen::MatrixXcd inv = s.llt().solve(eye);
    return power_trace(inv, -r) / m;
  };
  return run_chunked(trials, seed, r, trial_fn);
}

MomentEstimate mc_application_metric(const MetricParams& params, long trials,
                                     std::uint64_t seed) {
  if (const auto* blue = std::get_if<BlueMetric>(&params)) {
    check_sigma_z(blue->sigma_z, blue->m);
    const int n = static_cast<int>(blue->sigma_z.size());
    const int m = blue->m;
    Eigen::VectorXd lam(n);
    for (int k = 0; k < n; ++k) lam(k) = 1.0 / blue->sigma_z[k];
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
    auto trial_fn = [&, seed](long t) {
      Eigen::MatrixXcd h = sample_rectangle(n, m, seed, t);
      Eigen::MatrixXcd s = h.adjoint() * lam.asDiagonal() * h;
      check_invertible(s, t);
      return s.llt().solve(eye).trace().real();
    };
    return run_chunked(trials, seed, 0, trial_fn);
  }
  if (const auto* lmmse = std::get_if<LmmseMetric>(&params)) {
    check_sigma_z(lmmse->sigma_z, lmmse->m);
    if (!(lmmse->sigma_x2 > 0.0) || !std::isfinite(lmmse->sigma_x2))
      throw DomainError("signal power must be positive and finite");
    const int n = static_cast<int>(lmmse->sigma_z.size());
    const int m = lmmse->m;
    Eigen::VectorXd lam(n);
    for (int k = 0; k < n; ++k) lam(k) = 1.0 / lmmse->sigma_z[k];
    const Eigen::MatrixXcd shift =
        Eigen::MatrixXcd::Identity(m, m) / lmmse->sigma_x2;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
    auto trial_fn = [&, seed](long t) {
      Eigen::MatrixXcd h = sample_rectangle(n, m, seed, t);
      Eigen::MatrixXcd a = shift + h.adjoint() * lam.asDiagonal() * h;
      return a.llt().solve(eye).trace().real();
    };
    return run_chunked(trials, seed, 0, trial_fn);
  }
  const auto& scm = std::get<ScmMetric>(params);
  if (!(scm.lambda > 0.0) || !(scm.lambda < 1.0))
    throw DomainError("forgetting factor must lie in (0, 1)");
  if (scm.n < 2 || scm.m < 1 || scm.m >= scm.n)
    throw DimensionError("need n >= 2 snapshots and 1 <= m < n, got n=" +
                         std::to_string(scm.n) + " m=" +
                         std::to_string(scm.m));
  const int n = scm.n, m = scm.m;
  Eigen::MatrixXcd corr = scm.correlation.value_or(
      Eigen::MatrixXcd::Identity(m, m));
  if (corr.rows() != m || corr.cols() != m)
    throw DimensionError("correlation matrix must be m x m");
  if ((corr - corr.adjoint()).norm() > 1e-12 * corr.norm())
    throw NotPositiveDefinite("correlation matrix must be Hermitian");
  Eigen::LLT<Eigen::MatrixXcd> chol(corr);
  if (chol.info() != Eigen::Success)
    throw NotPositiveDefinite("correlation matrix must be positive definite");
  const Eigen::MatrixXcd root = chol.matrixL();
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(m, m);
  const std::vector<double> weights = scm_weights(scm.lambda, n);
  auto trial_fn = [&, seed](long t) {
    Eigen::MatrixXcd g = sample_rectangle(n, m, seed, t);
    Eigen::MatrixXcd rhat = Eigen::MatrixXcd::Zero(m, m);
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXcd h = root * g.row(k).transpose();
      rhat.noalias() += weights[k] * h * h.adjoint();
    }
    check_invertible(rhat, t);
    // Whitened loss |R^{1/2} Rhat^-1 R^{1/2} - I|_F^2; the Cholesky factor
    // gives the same value because L^* Rhat^-1 L is unitarily similar to it.
    Eigen::MatrixXcd whitened = root.adjoint() * rhat.llt().solve(root);
    return (whitened - eye).squaredNorm();
  };
  return run_chunked(trials, seed, 0, trial_fn);
}

}  // namespace gram
