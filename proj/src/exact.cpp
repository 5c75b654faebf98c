#include "gram/exact.hpp"

#include <cmath>
#include <string>

#include "gram/errors.hpp"
#include "gram/special.hpp"

namespace gram {

namespace {

constexpr double kEps = 0x1.0p-52;
constexpr double kCondGate = 1e12;
constexpr double kGapGate = 1e-8;
constexpr double kLogRangeGate = 600.0;
constexpr double kClusterWidth = 0.15;

// Complete homogeneous symmetric polynomials h_0..h_maxdeg of the points.
std::vector<double> hom_sym(const std::vector<double>& pts, int maxdeg) {
  std::vector<double> h(maxdeg + 1, 0.0);
  h[0] = 1.0;
  for (double y : pts)
    for (int j = 1; j <= maxdeg; ++j) h[j] += y * h[j - 1];
  return h;
}

// Elementary symmetric polynomials e_0..e_maxdeg.
std::vector<double> elem_sym(const std::vector<double>& pts, int maxdeg) {
  std::vector<double> e(maxdeg + 1, 0.0);
  e[0] = 1.0;
  int cap = std::min<int>(maxdeg, static_cast<int>(pts.size()));
  for (double y : pts)
    for (int j = cap; j >= 1; --j) e[j] += y * e[j - 1];
  return e;
}

struct DDResult {
  double value;
  double err;  // propagated absolute rounding-error bound
};

// Divided difference of t^d log t over ys by the standard tableau, with a
// running first-order error bound carried through every subtraction.
DDResult dd_tableau(const std::vector<double>& ys, int d) {
  size_t k = ys.size();
  std::vector<double> t(k), err(k);
  for (size_t i = 0; i < k; ++i) {
    t[i] = std::pow(ys[i], d) * std::log(ys[i]);
    err[i] = std::fabs(t[i]) * kEps;
  }
  for (size_t lev = 1; lev < k; ++lev)
    for (size_t i = 0; i + lev < k; ++i) {
      double gap = ys[i + lev] - ys[i];
      t[i] = (t[i + 1] - t[i]) / gap;
      err[i] = (err[i + 1] + err[i]) / gap + std::fabs(t[i]) * kEps;
    }
  return {t[0], err[0]};
}

// Same divided difference via the Taylor series of t^d log(t/c) around the
// midpoint c. Valid when the points cluster tightly around c; the polynomial
// part t^d log c has a vanishing order-N difference because d < N.
// Written in units of c so nothing over/underflows:
//   DD = c^{d-N} * sum_{j>=N} phi_j H_{j-N}(v),  v = (ys - c)/c,
//   phi_j = sum_{a<=min(d,j-1)} C(d,a) (-1)^{j-a+1} / (j-a).
SignLog dd_opitz(const std::vector<double>& ys, int d) {
  int order = static_cast<int>(ys.size()) - 1;  // = N
  double lo = ys.front(), hi = ys.front();
  for (double y : ys) {
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  double c = 0.5 * (lo + hi);
  std::vector<double> v(ys.size());
  for (size_t i = 0; i < ys.size(); ++i) v[i] = (ys[i] - c) / c;

  constexpr int kMaxTerms = 600;
  std::vector<double> H = hom_sym(v, kMaxTerms);
  std::vector<double> binom(d + 1);
  binom[0] = 1.0;
  for (int a = 1; a <= d; ++a) binom[a] = binom[a - 1] * (d - a + 1) / a;

  double sum = 0.0;
  int quiet = 0;
  for (int j = order; j <= order + kMaxTerms; ++j) {
    double phi = 0.0;
    for (int a = 0; a <= std::min(d, j - 1); ++a)
      phi += binom[a] * ((j - a) % 2 ? 1.0 : -1.0) / (j - a);
    double term = phi * H[j - order];
    sum += term;
    if (j > order + 8 && std::fabs(term) <= 1e-18 * std::fabs(sum)) {
      if (++quiet >= 3) {
        SignLog r = SignLog::from(sum);
        r.log += (d - order) * std::log(c);
        return r;
      }
    } else {
      quiet = 0;
    }
  }
  throw IllConditioned("cluster series for divided differences not converged");
}

double gap_products_log(const std::vector<double>& xs, int skip) {
  double log = 0.0;
  for (size_t u = 0; u < xs.size(); ++u)
    if (static_cast<int>(u) != skip)
      log += std::log(std::fabs(xs[skip] - xs[u]));
  return log;
}

}  // namespace

ExactEngine build_engine(const Spectrum& s) {
  ExactEngine e;
  e.spectrum = s;
  e.n = s.n();
  e.m = s.m;
  e.nm = e.n - e.m;
  e.p = s.p();
  const std::vector<double>& th = s.thetas;
  const int N = e.nm, m = e.m;
  std::vector<double> lows(th.begin(), th.begin() + N);
  std::vector<double> xs(th.begin() + N, th.end());

  // conditioning gates
  double max_log =
      std::max(std::fabs(std::log(th.front())), std::fabs(std::log(th.back())));
  if (e.n * max_log > kLogRangeGate)
    throw IllConditioned("eigenvalue dynamic range exceeds double precision (" +
                         std::to_string(e.n) + " * |log theta| = " +
                         std::to_string(e.n * max_log) + ")");
  if (s.min_relative_gap() < kGapGate)
    throw IllConditioned("near-repeated eigenvalues, relative gap " +
                         std::to_string(s.min_relative_gap()));

  e.clustered =
      (th.back() - th.front()) / (th.back() + th.front()) < kClusterWidth;

  // cached divided differences DD[t^d log t](theta_1..theta_N, x_i) for the
  // exponent window d in [N-p, N-1] used by the inverse-moment formula
  e.dd.assign(m, std::vector<SignLog>(e.p));
  e.probe_cond = 0.0;
  for (int i = 0; i < m; ++i) {
    std::vector<double> ys = lows;
    ys.push_back(xs[i]);
    for (int d = N - e.p; d <= N - 1; ++d) {
      if (e.clustered) {
        e.dd[i][d - (N - e.p)] = dd_opitz(ys, d);
      } else {
        DDResult r = dd_tableau(ys, d);
        double cond = r.value == 0.0 ? std::numeric_limits<double>::infinity()
                                     : r.err / (std::fabs(r.value) * kEps);
        e.probe_cond = std::max(e.probe_cond, cond);
        e.dd[i][d - (N - e.p)] = SignLog::from(r.value);
      }
    }
  }
  // prefactor L: all factors positive
  e.log_l = -std::log(static_cast<double>(m));
  for (int l = 1; l < m; ++l) e.log_l -= std::lgamma(l + 1.0);
  for (int l = N; l < e.n; ++l)
    for (int k = 0; k < l; ++k) e.log_l -= std::log(th[l] - th[k]);

  // factored cofactors of C
  e.log_px = Eigen::VectorXd(m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    for (double y : lows) acc += std::log(xs[i] - y);
    e.log_px(i) = acc;
  }
  e.log_det_c = e.log_px.sum();
  for (int k = 0; k < m; ++k) e.log_det_c += std::lgamma(k + 1.0);
  for (int l = 0; l < m; ++l)
    for (int i = 0; i < l; ++i) e.log_det_c += std::log(xs[l] - xs[i]);

  std::vector<double> eY = elem_sym(lows, m - 1);
  e.cof.assign(m, std::vector<SignLog>(m));
  for (int i = 0; i < m; ++i) {
    std::vector<double> others;
    for (int u = 0; u < m; ++u)
      if (u != i) others.push_back(xs[u]);
    std::vector<double> eo = elem_sym(others, m - 1);
    double log_den = gap_products_log(xs, i);
    double s_den = ((m - 1 - i) % 2) ? -1.0 : 1.0;  // xs ascending
    for (int j = 1; j <= m; ++j) {
      double ssum = 0.0;
      for (int t = j - 1; t < m; ++t) ssum += eY[t - (j - 1)] * eo[m - 1 - t];
      double sgn = ((m - j) % 2 ? -1.0 : 1.0) * s_den;
      double lg = e.log_det_c - std::lgamma(static_cast<double>(j)) -
                  e.log_px(i) + std::log(ssum) - log_den;
      e.cof[i][j - 1] = {sgn, lg};
    }
  }

  // Summation-cancellation probe. Every moment the engine reports is one
  // signed contraction through cof, so sum|term| / |sum term|, measured here
  // on the normalization identity M(1) = 1 and on each inverse order, bounds
  // the cancellation left in the outer sums; the tableau bound above only
  // covers the divided differences.
  {
    auto ratio = [](const std::vector<SignLog>& terms) {
      double lmax = -std::numeric_limits<double>::infinity();
      for (const SignLog& t : terms)
        if (t.sign != 0.0) lmax = std::max(lmax, t.log);
      if (std::isinf(lmax)) return 1.0;
      double total = 0.0, mass = 0.0;
      for (const SignLog& t : terms) {
        double v = t.sign * std::exp(t.log - lmax);
        total += v;
        mass += std::fabs(v);
      }
      if (total == 0.0) return std::numeric_limits<double>::infinity();
      return mass / std::fabs(total);
    };

    std::vector<SignLog> terms;
    terms.reserve(m * m);
    for (int i = 0; i < m; ++i) {
      std::vector<double> ys = lows;
      ys.push_back(xs[i]);
      std::vector<double> h = hom_sym(ys, m - 1);
      for (int j = 1; j <= m; ++j)
        terms.push_back(e.cof[i][j - 1] *
                        SignLog{1.0, std::lgamma(static_cast<double>(j)) +
                                         e.log_px(i) + std::log(h[j - 1]) +
                                         e.log_l});
    }
    e.probe_cond = std::max(e.probe_cond, ratio(terms));

    for (int r = 1; r <= e.p; ++r) {
      terms.clear();
      for (int j = 1; j <= r; ++j) {
        SignLog fac{((r - j) % 2) ? -1.0 : 1.0,
                    e.log_l - std::lgamma(static_cast<double>(r - j) + 1.0)};
        int col = e.p - r + j - 1;
        for (int i = 0; i < m; ++i)
          terms.push_back(e.cof[i][j - 1] * e.dd[i][col] *
                          SignLog{1.0, e.log_px(i)} * fac);
      }
      e.probe_cond = std::max(e.probe_cond, ratio(terms));
    }
  }
  if (e.probe_cond > kCondGate)
    throw IllConditioned(
        "cancellation beyond double precision, measured condition " +
        std::to_string(e.probe_cond));

  // Lagrange weights l_q(x_i) over the low nodes, sign+log
  e.lag.assign(m, std::vector<SignLog>(N));
  for (int i = 0; i < m; ++i)
    for (int q = 0; q < N; ++q) {
      double lg = 0.0, sgn = 1.0;
      for (int u = 0; u < N; ++u) {
        if (u == q) continue;
        lg += std::log(xs[i] - lows[u]) - std::log(std::fabs(lows[q] - lows[u]));
        if (lows[q] < lows[u]) sgn = -sgn;
      }
      e.lag[i][q] = {sgn, lg};
    }

  // diagnostics
  e.psi = Eigen::MatrixXd(N, N);
  for (int i = 0; i < N; ++i) {
    double pw = 1.0;
    for (int j = 0; j < N; ++j) {
      e.psi(i, j) = pw;
      pw *= lows[i];
    }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(e.psi);
  e.psi_inv = lu.solve(Eigen::MatrixXd::Identity(N, N));
  e.psi_cond = e.psi.cwiseAbs().colwise().sum().maxCoeff() *
               e.psi_inv.cwiseAbs().colwise().sum().maxCoeff();

  e.det_c = std::exp(e.log_det_c);
  e.cmat = Eigen::MatrixXd(m, m);
  e.cofactor = Eigen::MatrixXd(m, m);
  for (int i = 0; i < m; ++i) {
    std::vector<double> ys = lows;
    ys.push_back(xs[i]);
    std::vector<double> h = hom_sym(ys, m - 1);
    for (int k = 1; k <= m; ++k)
      e.cmat(i, k - 1) = std::exp(std::lgamma(static_cast<double>(k)) +
                                  e.log_px(i) + std::log(h[k - 1]));
    for (int j = 0; j < m; ++j) e.cofactor(i, j) = e.cof[i][j].value();
  }
  return e;
}

namespace {

// T_{i,j}(sigma) = x_i^w - sum_q l_q(x_i) theta_q^w with w = N+sigma+j-2,
// the interpolation error of t^w at x_i. Used for non-integer exponents.
double t_direct(const ExactEngine& e, int i, double w) {
  const std::vector<double>& th = e.spectrum.thetas;
  double x = th[e.nm + i];
  double sum = std::exp(w * std::log(x));
  for (int q = 0; q < e.nm; ++q) {
    SignLog term = e.lag[i][q] * SignLog{1.0, w * std::log(th[q])};
    sum -= term.value();
  }
  return sum;
}

double check_order(const ExactEngine& e, int r) {
  if (r < 1 || r > e.p)
    throw OrderOutOfRange("inverse order " + std::to_string(r) +
                          " outside [1, " + std::to_string(e.p) + "]");
  return 0;
}

}  // namespace

double mellin(const ExactEngine& e, double s) {
  if (!(s > 0.0)) throw DomainError("mellin transform needs s > 0");
  const std::vector<double>& th = e.spectrum.thetas;
  const int N = e.nm, m = e.m;
  bool integral = (s == std::floor(s));
  if (integral && (e.n + s + m) * std::fabs(std::log(th.back())) > 700.0)
    throw IllConditioned("positive-moment magnitude exceeds double range");

  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    std::vector<double> h;
    if (integral) {
      std::vector<double> ys(th.begin(), th.begin() + N);
      ys.push_back(th[N + i]);
      h = hom_sym(ys, static_cast<int>(s) + m - 2);
    }
    for (int j = 1; j <= m; ++j) {
      SignLog t;
      if (integral) {
        int idx = static_cast<int>(s) + j - 2;
        t = {1.0, e.log_px(i) + std::log(h[idx])};
      } else {
        t = SignLog::from(t_direct(e, i, N + s + j - 2));
      }
      SignLog gam{1.0, std::lgamma(s + j - 1)};
      SignLog term = e.cof[i][j - 1] * gam * t * SignLog{1.0, e.log_l};
      total += term.value();
    }
  }
  return total;
}

double positive_moment(const ExactEngine& e, int r) {
  if (r < 0) throw OrderOutOfRange("positive_moment needs r >= 0");
  if (r == 0) return 1.0;
  return mellin(e, static_cast<double>(r) + 1.0);
}

double inverse_moment(const ExactEngine& e, int r) {
  check_order(e, r);
  double total = 0.0;
  for (int j = 1; j <= r; ++j) {
    double c_sign = ((r - j) % 2) ? -1.0 : 1.0;
    double c_log = -std::lgamma(static_cast<double>(r - j) + 1.0);
    int col = e.p - r + j - 1;  // d = nm-r+j-1 relative to the cached window
    for (int i = 0; i < e.m; ++i) {
      SignLog g = SignLog{1.0, e.log_px(i)} * e.dd[i][col];
      SignLog term = e.cof[i][j - 1] * g *
                     SignLog{c_sign, c_log + e.log_l};
      total += term.value();
    }
  }
  if (!(total > 0.0))
    throw IllConditioned("inverse moment evaluated nonpositive (" +
                         std::to_string(total) +
                         "); spectrum conditioning is beyond double precision");
  return total;
}

namespace {

double continuation_terms(const ExactEngine& e, int r, double s, int j_begin) {
  const int N = e.nm, m = e.m;
  double total = 0.0;
  for (int j = j_begin; j <= m; ++j) {
    SignLog gam = gamma_signlog(s - r + j);
    for (int i = 0; i < m; ++i) {
      SignLog t = SignLog::from(t_direct(e, i, N + s - r + j - 1));
      SignLog term = e.cof[i][j - 1] * gam * t * SignLog{1.0, e.log_l};
      total += term.value();
    }
  }
  return total;
}

}  // namespace

std::vector<double> mellin_continuation_check(const ExactEngine& e, int r,
                                        const std::vector<double>& svec) {
  check_order(e, r);
  for (double s : svec)
    if (!(s > 0.0) || s > 0.05)
      throw DomainError("continuation offsets must lie in (0, 0.05]");
  std::vector<double> out;
  out.reserve(svec.size());
  for (double s : svec) out.push_back(continuation_terms(e, r, s, 1));
  return out;
}

double continuation_tail(const ExactEngine& e, int r, double s) {
  check_order(e, r);
  if (!(s > 0.0) || s > 0.05)
    throw DomainError("continuation offsets must lie in (0, 0.05]");
  if (r + 1 > e.m) return 0.0;
  return continuation_terms(e, r, s, r + 1);
}

}  // namespace gram
