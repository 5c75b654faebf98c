#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gram/asymptotic.hpp"
#include "gram/errors.hpp"
#include "gram/estimation.hpp"
#include "gram/exact.hpp"
#include "gram/io.hpp"
#include "gram/oracle.hpp"
#include "gram/scm.hpp"
#include "gram/spectrum.hpp"

namespace fs = std::filesystem;

namespace {

// One result table: fixed column schema, key=value metadata, pre-formatted
// cells. Empty cells render as empty CSV fields and JSON nulls.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::vector<std::string>> rows;
};

std::string fd(double v) { return gram::format_g17(v); }
std::string fi(long long v) { return std::to_string(v); }

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string render_csv(const Table& t) {
  std::string out;
  for (const auto& [key, value] : t.metadata)
    out += "# " + key + "=" + value + "\n";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ",";
    out += t.columns[c];
  }
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ",";
      out += row[c];
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t) {
  std::string out = "{\n  \"metadata\": {";
  for (std::size_t i = 0; i < t.metadata.size(); ++i) {
    if (i) out += ",";
    out += "\n    \"" + json_escape(t.metadata[i].first) + "\": \"" +
           json_escape(t.metadata[i].second) + "\"";
  }
  out += t.metadata.empty() ? "},\n" : "\n  },\n";
  out += "  \"schema\": [";
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    if (c) out += ", ";
    out += "\"" + t.columns[c] + "\"";
  }
  out += "],\n  \"rows\": [";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (r) out += ",";
    out += "\n    {";
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
      if (c) out += ", ";
      out += "\"" + t.columns[c] + "\": ";
      const std::string& cell = t.rows[r][c];
      if (cell.empty())
        out += "null";
      else if (t.columns[c] == "method")
        out += "\"" + json_escape(cell) + "\"";
      else
        out += cell;
    }
    out += "}";
  }
  out += t.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

// Atomic write: a temp file next to the target, renamed into place, so a
// failure never leaves a partial table behind.
void write_file_atomic(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  try {
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f)
        throw gram::DomainError("cannot open '" + tmp.string() +
                                "' for writing");
      f << content;
      if (!f.good())
        throw gram::DomainError("short write to '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void emit(const Table& t, const std::string& format,
          const std::string& output) {
  std::string content = format == "csv" ? render_csv(t) : render_json(t);
  if (output.empty())
    std::fputs(content.c_str(), stdout);
  else
    write_file_atomic(output, content);
}

// Inclusive integer range "a..b" or a comma list; 0 is skipped (mu(0) = 1 is
// reported as metadata, never as a row).
std::vector<int> parse_orders(const std::string& text) {
  auto parse_int = [](const std::string& tok) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw gram::DomainError("cannot parse order '" + tok + "'");
    }
    if (used != tok.size())
      throw gram::DomainError("cannot parse order '" + tok + "'");
    return v;
  };
  std::vector<int> out;
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    int a = parse_int(text.substr(0, dots));
    int b = parse_int(text.substr(dots + 2));
    if (a > b)
      throw gram::DomainError("order range '" + text + "' is reversed");
    for (int r = a; r <= b; ++r)
      if (r != 0) out.push_back(r);
  } else {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t comma = text.find(',', start);
      std::string tok = text.substr(
          start, comma == std::string::npos ? comma : comma - start);
      if (!tok.empty()) {
        int r = parse_int(tok);
        if (r != 0) out.push_back(r);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (out.empty())
    throw gram::DomainError("order list '" + text +
                            "' contains no nonzero orders");
  return out;
}

struct SourceOpts {
  std::string file;
  std::string model;
  int n = 0;
  int m = 0;
  std::uint64_t model_seed = 1;
  bool n_given = false;
  bool m_given = false;
};

void add_source_flags(CLI::App* cmd, SourceOpts& o, const char* noun) {
  cmd->add_option("--spectrum-file", o.file,
                  std::string("JSON file {\"thetas\": [...], \"m\": k} with "
                              "the ") + noun)
      ->check(CLI::ExistingFile);
  cmd->add_option("--model", o.model,
                  std::string("generate the ") + noun +
                      " from a built-in model: bessel | shifted-wishart "
                      "(alias randpd)");
  cmd->add_option("--n", o.n, "ambient dimension (with --model)");
  cmd->add_option("--m", o.m, "Gram dimension (overrides the file's m)");
  cmd->add_option("--model-seed", o.model_seed,
                  "seed for the shifted-wishart draw")
      ->default_val(std::uint64_t{1});
}

void capture_counts(CLI::App* cmd, SourceOpts& o) {
  o.n_given = cmd->count("--n") > 0;
  o.m_given = cmd->count("--m") > 0;
}

gram::Spectrum resolve_spectrum(const SourceOpts& o) {
  const bool has_file = !o.file.empty();
  const bool has_model = !o.model.empty();
  if (has_file == has_model)
    throw gram::DomainError(
        "exactly one of --spectrum-file and --model is required");
  if (has_file) {
    if (o.n_given)
      throw gram::DomainError("--n applies only to --model sources");
    return gram::load_spectrum(o.file, o.m_given ? o.m : -1);
  }
  if (!o.n_given || !o.m_given)
    throw gram::DomainError("--model requires --n and --m");
  gram::CorrelationMatrix mat;
  if (o.model == "bessel") {
    mat = gram::bessel_scattering_matrix(o.n);
  } else if (o.model == "shifted-wishart" || o.model == "randpd") {
    mat = gram::shifted_wishart_matrix(o.n, o.model_seed);
  } else {
    throw gram::DomainError("unknown model '" + o.model +
                            "' (expected bessel or shifted-wishart)");
  }
  return gram::spectrum_from_matrix(mat, o.m);
}

const std::vector<std::string> kMomentColumns = {
    "method", "n", "m", "order", "value", "std_error", "trials", "seed"};

std::vector<std::string> prepend(const std::string& head,
                                 std::vector<std::string> rest) {
  rest.insert(rest.begin(), head);
  return rest;
}

// ---- subcommand bodies ----

Table run_moments(const SourceOpts& src, const std::string& orders_text) {
  gram::Spectrum sp = resolve_spectrum(src);
  std::vector<int> orders = parse_orders(orders_text);
  gram::ExactEngine e = gram::build_engine(sp);
  Table t;
  t.columns = kMomentColumns;
  t.metadata = {{"mu0", "1"}};
  for (int r : orders) {
    double v = r > 0 ? gram::positive_moment(e, r)
                     : gram::inverse_moment(e, -r);
    t.rows.push_back({"exact", fi(e.n), fi(e.m), fi(r), fd(v), "", "", ""});
  }
  return t;
}

Table run_asymptotic(const SourceOpts& src, const std::string& orders_text) {
  gram::Spectrum sp = resolve_spectrum(src);
  std::vector<int> orders = parse_orders(orders_text);
  int deepest = 0;
  for (int r : orders) {
    if (r > 0)
      throw gram::OrderOutOfRange(
          "asymptotic supports inverse orders only; use `moments` for "
          "positive orders");
    deepest = std::max(deepest, -r);
  }
  gram::AsymptoticState st =
      gram::compute_derivatives(gram::solve_fixed_point(sp), deepest - 1);
  Table t;
  t.columns = kMomentColumns;
  t.metadata = {{"m0", fd(st.m0)}, {"residual", fd(st.residual)}};
  for (int r : orders) {
    double v = gram::asymptotic_inverse_moment(st, -r);
    t.rows.push_back(
        {"asymptotic", fi(st.n), fi(st.m), fi(r), fd(v), "", "", ""});
  }
  return t;
}

Table run_mc(const SourceOpts& src, const std::string& orders_text,
             long trials, std::uint64_t seed) {
  gram::Spectrum sp = resolve_spectrum(src);
  std::vector<int> orders = parse_orders(orders_text);
  Table t;
  t.columns = kMomentColumns;
  for (int r : orders) {
    gram::MomentEstimate est = gram::mc_empirical_moment(sp, r, trials, seed);
    t.rows.push_back({"mc", fi(sp.n()), fi(sp.m), fi(r), fd(est.mean),
                      fd(est.std_error), fi(est.trials),
                      fi(static_cast<long long>(est.seed))});
  }
  return t;
}

Table run_blue(const SourceOpts& src, long mc_trials, std::uint64_t seed) {
  gram::Spectrum noise_sp = resolve_spectrum(src);
  gram::NoiseModel noise{noise_sp.thetas};
  const int n = noise_sp.n(), m = noise_sp.m;
  Table t;
  t.columns = kMomentColumns;
  double v = gram::blue_mse(noise, m);
  t.rows.push_back({"blue", fi(n), fi(m), "", fd(v), "", "", ""});
  if (mc_trials > 0) {
    gram::MomentEstimate est = gram::mc_application_metric(
        gram::BlueMetric{noise_sp.thetas, m}, mc_trials, seed);
    t.rows.push_back({"blue-mc", fi(n), fi(m), "", fd(est.mean),
                      fd(est.std_error), fi(est.trials),
                      fi(static_cast<long long>(seed))});
  }
  return t;
}

Table run_lmmse(const SourceOpts& src, const std::vector<double>& sigmas,
                const std::string& series, int high_terms, int low_terms,
                long mc_trials, std::uint64_t seed) {
  gram::Spectrum noise_sp = resolve_spectrum(src);
  gram::NoiseModel noise{noise_sp.thetas};
  const int n = noise_sp.n(), m = noise_sp.m;
  const int p = noise_sp.p();
  const int l = high_terms >= 0 ? high_terms : p - 1;
  Table t;
  t.columns = prepend("sigma_x2", kMomentColumns);
  t.metadata = {{"high_terms", fi(l)}, {"low_terms", fi(low_terms)}};
  std::string refused;
  for (double s2 : sigmas) {
    if (series != "low") {
      gram::SeriesValue sv = gram::lmmse_mse_high_snr(noise, m, s2, l);
      t.rows.push_back({fd(s2), "lmmse-high", fi(n), fi(m), fi(l),
                        fd(sv.value), "", "", ""});
    }
    if (series != "high") {
      try {
        gram::SeriesValue sv = gram::lmmse_mse_low_snr(noise, m, s2,
                                                       low_terms);
        t.rows.push_back({fd(s2), "lmmse-low", fi(n), fi(m), fi(low_terms),
                          fd(sv.value), "", "", ""});
      } catch (const gram::ConvergenceWarning&) {
        // In combined mode a diverging expansion is reported as a gap, not
        // a failure: the other columns still carry usable data.
        if (series == "low") throw;
        t.rows.push_back(
            {fd(s2), "lmmse-low", fi(n), fi(m), fi(low_terms), "", "", "",
             ""});
        refused += (refused.empty() ? "" : ",") + fd(s2);
      }
    }
    if (mc_trials > 0) {
      gram::MomentEstimate est = gram::mc_application_metric(
          gram::LmmseMetric{noise_sp.thetas, m, s2}, mc_trials, seed);
      t.rows.push_back({fd(s2), "lmmse-mc", fi(n), fi(m), "", fd(est.mean),
                        fd(est.std_error), fi(est.trials),
                        fi(static_cast<long long>(seed))});
    }
  }
  if (!refused.empty())
    t.metadata.push_back({"low_series_diverged_at", refused});
  return t;
}

Table run_scm(int m, int n, std::vector<double> lambdas, long mc_trials,
              std::uint64_t seed) {
  if (lambdas.empty()) lambdas = gram::lambda_grid();
  gram::LossCurve curve = gram::optimize_lambda(m, n, lambdas);
  Table t;
  t.columns = prepend("lambda", kMomentColumns);
  t.metadata = {{"lambda_star", fd(curve.lambda_star)},
                {"loss_star", fd(curve.loss_star)}};
  std::size_t iok = 0, irej = 0;
  for (double lam : lambdas) {
    if (iok < curve.lambdas.size() && curve.lambdas[iok] == lam) {
      t.rows.push_back({fd(lam), "scm", fi(n), fi(m), "",
                        fd(curve.losses[iok]), "", "", ""});
      ++iok;
    } else {
      t.rows.push_back({fd(lam), "scm-rejected", fi(n), fi(m), "", "", "",
                        "", ""});
      ++irej;
    }
    if (mc_trials > 0) {
      gram::MomentEstimate est = gram::mc_application_metric(
          gram::ScmMetric{m, n, lam, std::nullopt}, mc_trials, seed);
      t.rows.push_back({fd(lam), "scm-mc", fi(n), fi(m), "", fd(est.mean),
                        fd(est.std_error), fi(est.trials),
                        fi(static_cast<long long>(seed))});
    }
  }
  (void)irej;
  return t;
}

// ---- figure datasets ----

gram::Spectrum figure_spectrum(bool bessel, int n, int m,
                               std::uint64_t model_seed) {
  return gram::spectrum_from_matrix(
      bessel ? gram::bessel_scattering_matrix(n)
             : gram::shifted_wishart_matrix(n, model_seed),
      m);
}

// Inverse moments over n: exact vs asymptotic vs MC, m = 3.
Table figure_moments(bool bessel, long trials, std::uint64_t seed,
                     std::uint64_t model_seed) {
  const int m = 3;
  Table t;
  t.columns = kMomentColumns;
  for (int n = 5; n <= 10; ++n) {
    gram::Spectrum sp = figure_spectrum(bessel, n, m, model_seed);
    gram::ExactEngine e = gram::build_engine(sp);
    const int rmax = std::min(3, sp.p());
    gram::AsymptoticState st =
        gram::compute_derivatives(gram::solve_fixed_point(sp), rmax - 1);
    for (int r = 1; r <= rmax; ++r) {
      t.rows.push_back({"exact", fi(n), fi(m), fi(-r),
                        fd(gram::inverse_moment(e, r)), "", "", ""});
      t.rows.push_back({"asymptotic", fi(n), fi(m), fi(-r),
                        fd(gram::asymptotic_inverse_moment(st, r)), "", "",
                        ""});
      gram::MomentEstimate est =
          gram::mc_empirical_moment(sp, -r, trials, seed);
      t.rows.push_back({"mc", fi(n), fi(m), fi(-r), fd(est.mean),
                        fd(est.std_error), fi(est.trials),
                        fi(static_cast<long long>(seed))});
    }
  }
  return t;
}

// BLUE MSE over n with the scattering-model noise covariance, m = 3.
Table figure_blue(long trials, std::uint64_t seed) {
  const int m = 3;
  Table t;
  t.columns = kMomentColumns;
  for (int n = 5; n <= 10; ++n) {
    gram::Spectrum noise_sp = figure_spectrum(true, n, m, 1);
    gram::NoiseModel noise{noise_sp.thetas};
    t.rows.push_back({"blue", fi(n), fi(m), "", fd(gram::blue_mse(noise, m)),
                      "", "", ""});
    gram::MomentEstimate est = gram::mc_application_metric(
        gram::BlueMetric{noise_sp.thetas, m}, trials, seed);
    t.rows.push_back({"blue-mc", fi(n), fi(m), "", fd(est.mean),
                      fd(est.std_error), fi(est.trials),
                      fi(static_cast<long long>(seed))});
  }
  return t;
}

// LMMSE MSE over signal power: both series plus MC, m = 3, n = 10.
Table figure_lmmse(bool high_regime, long trials, std::uint64_t seed) {
  const int m = 3, n = 10;
  std::vector<double> sigmas;
  if (high_regime)
    sigmas = {10.0, 31.622776601683793, 100.0, 316.22776601683796, 1000.0,
              3162.2776601683795, 10000.0};
  else
    sigmas = {0.001, 0.0031622776601683794, 0.01, 0.031622776601683791, 0.1};
  SourceOpts src;
  src.model = "bessel";
  src.n = n;
  src.m = m;
  src.n_given = src.m_given = true;
  return run_lmmse(src, sigmas, "both", -1, 8, trials, seed);
}

// SCM loss over the default lambda grid, MC spot checks, m = 3, n = 10.
Table figure_scm(long trials, std::uint64_t seed) {
  const int m = 3, n = 10;
  std::vector<double> grid = gram::lambda_grid();
  gram::LossCurve curve = gram::optimize_lambda(m, n, grid);
  Table t;
  t.columns = prepend("lambda", kMomentColumns);
  t.metadata = {{"lambda_star", fd(curve.lambda_star)},
                {"loss_star", fd(curve.loss_star)}};
  std::size_t iok = 0;
  for (double lam : grid) {
    if (iok < curve.lambdas.size() && curve.lambdas[iok] == lam) {
      t.rows.push_back({fd(lam), "scm", fi(n), fi(m), "",
                        fd(curve.losses[iok]), "", "", ""});
      ++iok;
    } else {
      t.rows.push_back(
          {fd(lam), "scm-rejected", fi(n), fi(m), "", "", "", "", ""});
    }
  }
  for (double lam : {0.3, 0.5, 0.7}) {
    gram::MomentEstimate est = gram::mc_application_metric(
        gram::ScmMetric{m, n, lam, std::nullopt}, trials, seed);
    t.rows.push_back({fd(lam), "scm-mc", fi(n), fi(m), "", fd(est.mean),
                      fd(est.std_error), fi(est.trials),
                      fi(static_cast<long long>(seed))});
  }
  return t;
}

void run_figures(const std::string& which, const std::string& out_dir,
                 long trials, std::uint64_t seed, std::uint64_t model_seed) {
  std::set<int> wanted;
  if (which == "all") {
    wanted = {1, 2, 3, 4, 5, 6};
  } else {
    for (std::size_t start = 0; start <= which.size();) {
      std::size_t comma = which.find(',', start);
      std::string tok = which.substr(
          start, comma == std::string::npos ? comma : comma - start);
      if (!tok.empty()) {
        if (tok.size() != 1 || tok[0] < '1' || tok[0] > '6')
          throw gram::DomainError("--which takes figure numbers 1-6 or "
                                  "'all', got '" + tok + "'");
        wanted.insert(tok[0] - '0');
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (wanted.empty())
      throw gram::DomainError("--which selected no figures");
  }
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  try {
    for (int k : wanted) {
      Table t;
      switch (k) {
        case 1: t = figure_moments(true, trials, seed, model_seed); break;
        case 2: t = figure_moments(false, trials, seed, model_seed); break;
        case 3: t = figure_blue(trials, seed); break;
        case 4: t = figure_lmmse(true, trials, seed); break;
        case 5: t = figure_lmmse(false, trials, seed); break;
        default: t = figure_scm(trials, seed); break;
      }
      fs::path target = fs::path(out_dir) / ("fig" + std::to_string(k) +
                                             ".csv");
      write_file_atomic(target, render_csv(t));
      written.push_back(target);
    }
  } catch (...) {
    // A figure set is one artifact: drop the files already produced so a
    // failed run leaves nothing behind.
    for (const fs::path& f : written) {
      std::error_code ec;
      fs::remove(f, ec);
    }
    throw;
  }
}

int report(const std::exception& e, const std::string& category) {
  std::string what = e.what();
  std::string type = "Error";
  auto pos = what.find(": ");
  if (pos != std::string::npos && pos > 0 && what.find(' ') > pos) {
    type = what.substr(0, pos);
    what = what.substr(pos + 2);
  }
  std::cerr << "{\"error\": {\"type\": \"" << json_escape(type)
            << "\", \"category\": \"" << category << "\", \"message\": \""
            << json_escape(what) << "\"}}\n";
  if (category == "conditioning") return 3;
  if (category == "convergence") return 4;
  if (category == "validation") return 2;
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and asymptotic moments of one-sided correlated Gram "
               "matrices, with estimation-error applications"};
  app.require_subcommand(1);

  std::string format = "json", output, orders_text;
  long trials = 10000, mc_trials = 0;
  std::uint64_t seed = 42;

  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "table format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->default_val("json");
    cmd->add_option("--output", output,
                    "write the table to this file (default stdout)");
  };

  SourceOpts moments_src, asym_src, mc_src, blue_src, lmmse_src;

  CLI::App* cmd_moments =
      app.add_subcommand("moments", "exact moments of the Gram matrix");
  add_source_flags(cmd_moments, moments_src, "eigenvalue spectrum");
  cmd_moments->add_option("--orders,--order", orders_text,
                          "orders, e.g. '-2..3' or '1,2,-1'")
      ->required();
  add_output_flags(cmd_moments);

  CLI::App* cmd_asym = app.add_subcommand(
      "asymptotic", "deterministic-equivalent inverse moments");
  add_source_flags(cmd_asym, asym_src, "eigenvalue spectrum");
  cmd_asym->add_option("--orders,--order", orders_text,
                       "inverse orders, e.g. '-3..-1'")
      ->required();
  add_output_flags(cmd_asym);

  CLI::App* cmd_mc =
      app.add_subcommand("mc", "Monte Carlo moment estimates");
  add_source_flags(cmd_mc, mc_src, "eigenvalue spectrum");
  cmd_mc->add_option("--orders,--order", orders_text,
                     "orders, e.g. '-2..3' or '-1'")
      ->required();
  cmd_mc->add_option("--trials", trials, "Monte Carlo trials")
      ->default_val(10000L)
      ->check(CLI::PositiveNumber);
  cmd_mc->add_option("--seed", seed, "RNG seed")->default_val(
      std::uint64_t{42});
  add_output_flags(cmd_mc);

  CLI::App* cmd_blue = app.add_subcommand(
      "blue", "best-linear-unbiased-estimator error prediction");
  add_source_flags(cmd_blue, blue_src, "noise covariance spectrum");
  cmd_blue->add_option("--mc-trials", mc_trials,
                       "also simulate with this many trials")
      ->default_val(0L);
  cmd_blue->add_option("--seed", seed, "RNG seed")->default_val(
      std::uint64_t{42});
  add_output_flags(cmd_blue);

  std::vector<double> sigmas;
  std::string series = "both";
  int high_terms = -1, low_terms = 8;
  CLI::App* cmd_lmmse =
      app.add_subcommand("lmmse", "LMMSE error series predictions");
  add_source_flags(cmd_lmmse, lmmse_src, "noise covariance spectrum");
  cmd_lmmse->add_option("--sigma-x2", sigmas, "signal powers to evaluate")
      ->required()
      ->delimiter(',');
  cmd_lmmse->add_option("--series", series, "which expansion to evaluate")
      ->check(CLI::IsMember({"high", "low", "both"}))
      ->default_val("both");
  cmd_lmmse->add_option("--high-terms", high_terms,
                        "high-power series truncation (default p-1)")
      ->default_val(-1);
  cmd_lmmse->add_option("--low-terms", low_terms,
                        "low-power series truncation")
      ->default_val(8)
      ->check(CLI::NonNegativeNumber);
  cmd_lmmse->add_option("--mc-trials", mc_trials,
                        "also simulate with this many trials")
      ->default_val(0L);
  cmd_lmmse->add_option("--seed", seed, "RNG seed")->default_val(
      std::uint64_t{42});
  add_output_flags(cmd_lmmse);

  int scm_m = 0, scm_n = 0;
  std::vector<double> lambdas;
  CLI::App* cmd_scm = app.add_subcommand(
      "scm", "sample-covariance inversion loss and forgetting-factor "
             "optimization");
  cmd_scm->add_option("--m", scm_m, "input dimension")->required();
  cmd_scm->add_option("--n", scm_n, "window length")->required();
  cmd_scm->add_option("--lambda", lambdas,
                      "forgetting factors (default 0.05..0.95 step 0.05)")
      ->delimiter(',');
  cmd_scm->add_option("--mc-trials", mc_trials,
                      "also simulate with this many trials")
      ->default_val(0L);
  cmd_scm->add_option("--seed", seed, "RNG seed")->default_val(
      std::uint64_t{42});
  add_output_flags(cmd_scm);

  std::string which = "all", out_dir = ".";
  std::uint64_t fig_model_seed = 1;
  CLI::App* cmd_figures = app.add_subcommand(
      "figures", "emit the six reference datasets as CSV files");
  cmd_figures->add_option("--which", which, "1-6, comma list, or 'all'")
      ->default_val("all");
  cmd_figures->add_option("--out-dir", out_dir, "target directory")
      ->default_val(".");
  cmd_figures->add_option("--trials", trials, "Monte Carlo trials per point")
      ->default_val(10000L)
      ->check(CLI::PositiveNumber);
  cmd_figures->add_option("--seed", seed, "RNG seed")->default_val(
      std::uint64_t{42});
  cmd_figures->add_option("--model-seed", fig_model_seed,
                          "seed for the shifted-wishart model")
      ->default_val(std::uint64_t{1});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_moments->parsed()) {
      capture_counts(cmd_moments, moments_src);
      emit(run_moments(moments_src, orders_text), format, output);
    } else if (cmd_asym->parsed()) {
      capture_counts(cmd_asym, asym_src);
      emit(run_asymptotic(asym_src, orders_text), format, output);
    } else if (cmd_mc->parsed()) {
      capture_counts(cmd_mc, mc_src);
      emit(run_mc(mc_src, orders_text, trials, seed), format, output);
    } else if (cmd_blue->parsed()) {
      capture_counts(cmd_blue, blue_src);
      emit(run_blue(blue_src, mc_trials, seed), format, output);
    } else if (cmd_lmmse->parsed()) {
      capture_counts(cmd_lmmse, lmmse_src);
      emit(run_lmmse(lmmse_src, sigmas, series, high_terms, low_terms,
                     mc_trials, seed),
           format, output);
    } else if (cmd_scm->parsed()) {
      emit(run_scm(scm_m, scm_n, lambdas, mc_trials, seed), format, output);
    } else if (cmd_figures->parsed()) {
      run_figures(which, out_dir, trials, seed, fig_model_seed);
    }
  } catch (const gram::ValidationError& e) {
    return report(e, "validation");
  } catch (const gram::ConditioningError& e) {
    return report(e, "conditioning");
  } catch (const gram::ConvergenceError& e) {
    return report(e, "convergence");
  } catch (const std::exception& e) {
    return report(e, "internal");
  }
  return 0;
}
