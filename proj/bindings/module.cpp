#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "gram/asymptotic.hpp"
#include "gram/errors.hpp"
#include "gram/estimation.hpp"
#include "gram/exact.hpp"
#include "gram/oracle.hpp"
#include "gram/scm.hpp"
#include "gram/spectrum.hpp"

namespace py = pybind11;

namespace {

Eigen::MatrixXcd to_matrix(
    const std::vector<std::vector<std::complex<double>>>& rows) {
  if (rows.empty()) throw gram::DimensionError("matrix must not be empty");
  const auto n = rows.size();
  const auto c = rows.front().size();
  Eigen::MatrixXcd a(n, c);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != c)
      throw gram::DimensionError("matrix rows must have equal length");
    for (std::size_t j = 0; j < c; ++j) a(i, j) = rows[i][j];
  }
  return a;
}

}  // namespace

PYBIND11_MODULE(_gram_moments, mod) {
  mod.doc() = "Exact and asymptotic moments of one-sided correlated Gram "
              "matrices";

  py::register_exception<gram::ValidationError>(mod, "ValidationError",
                                                PyExc_ValueError);
  py::register_exception<gram::ConditioningError>(mod, "ConditioningError",
                                                  PyExc_ArithmeticError);
  py::register_exception<gram::ConvergenceError>(mod, "ConvergenceError",
                                                 PyExc_RuntimeError);

  py::class_<gram::Spectrum>(mod, "Spectrum")
      .def_readonly("thetas", &gram::Spectrum::thetas)
      .def_readonly("m", &gram::Spectrum::m)
      .def_property_readonly("n", &gram::Spectrum::n)
      .def_property_readonly("p", &gram::Spectrum::p)
      .def("__repr__", [](const gram::Spectrum& s) {
        return "Spectrum(n=" + std::to_string(s.n()) +
               ", m=" + std::to_string(s.m) + ")";
      });

  mod.def("make_spectrum", &gram::make_spectrum, py::arg("thetas"),
          py::arg("m"));
  mod.def("scale_spectrum", &gram::scale_spectrum, py::arg("spectrum"),
          py::arg("c"));
  mod.def(
      "bessel_spectrum",
      [](int n, int m) {
        return gram::spectrum_from_matrix(gram::bessel_scattering_matrix(n),
                                          m);
      },
      py::arg("n"), py::arg("m"));
  mod.def(
      "shifted_wishart_spectrum",
      [](int n, int m, std::uint64_t seed) {
        return gram::spectrum_from_matrix(
            gram::shifted_wishart_matrix(n, seed), m);
      },
      py::arg("n"), py::arg("m"), py::arg("seed") = 1);
  mod.def(
      "spectrum_from_matrix",
      [](const std::vector<std::vector<std::complex<double>>>& entries,
         int m, double gap_tol) {
        gram::CorrelationMatrix c{to_matrix(entries),
                                  gram::MatrixModel::user};
        return gram::spectrum_from_matrix(c, m, gap_tol);
      },
      py::arg("entries"), py::arg("m"), py::arg("gap_tol") = 1e-8);

  py::class_<gram::ExactEngine>(mod, "ExactEngine")
      .def_property_readonly("n",
                             [](const gram::ExactEngine& e) { return e.n; })
      .def_property_readonly("m",
                             [](const gram::ExactEngine& e) { return e.m; })
      .def_property_readonly("p",
                             [](const gram::ExactEngine& e) { return e.p; })
      .def("mellin",
           [](const gram::ExactEngine& e, double s) {
             return gram::mellin(e, s);
           },
           py::arg("s"))
      .def("positive_moment",
           [](const gram::ExactEngine& e, int r) {
             return gram::positive_moment(e, r);
           },
           py::arg("r"))
      .def("inverse_moment",
           [](const gram::ExactEngine& e, int r) {
             return gram::inverse_moment(e, r);
           },
           py::arg("r"))
      .def("mellin_continuation_check",
           [](const gram::ExactEngine& e, int r,
              const std::vector<double>& svec) {
             return gram::mellin_continuation_check(e, r, svec);
           },
           py::arg("r"), py::arg("s_list"))
      .def("continuation_tail",
           [](const gram::ExactEngine& e, int r, double s) {
             return gram::continuation_tail(e, r, s);
           },
           py::arg("r"), py::arg("s"));

  mod.def("build_engine", &gram::build_engine, py::arg("spectrum"));

  py::class_<gram::AsymptoticState>(mod, "AsymptoticState")
      .def_readonly("m0", &gram::AsymptoticState::m0)
      .def_readonly("residual", &gram::AsymptoticState::residual)
      .def_readonly("m_derivs", &gram::AsymptoticState::m_derivs)
      .def_property_readonly("max_order",
                             &gram::AsymptoticState::max_order);

  mod.def(
      "solve_fixed_point",
      [](const std::vector<double>& thetas, int m, double tol,
         int max_iter) {
        return gram::solve_fixed_point(thetas, m, tol, max_iter);
      },
      py::arg("thetas"), py::arg("m"), py::arg("tol") = 1e-13,
      py::arg("max_iter") = 100000);
  mod.def("compute_derivatives", &gram::compute_derivatives,
          py::arg("state"), py::arg("order"));
  mod.def("asymptotic_inverse_moment", &gram::asymptotic_inverse_moment,
          py::arg("state"), py::arg("r"));

  py::class_<gram::MomentEstimate>(mod, "MomentEstimate")
      .def_readonly("mean", &gram::MomentEstimate::mean)
      .def_readonly("std_error", &gram::MomentEstimate::std_error)
      .def_readonly("trials", &gram::MomentEstimate::trials)
      .def_readonly("seed", &gram::MomentEstimate::seed)
      .def_readonly("order", &gram::MomentEstimate::order)
      .def("__repr__", [](const gram::MomentEstimate& e) {
        return "MomentEstimate(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) + ")";
      });

  mod.def("mc_empirical_moment", &gram::mc_empirical_moment,
          py::arg("spectrum"), py::arg("r"), py::arg("trials"),
          py::arg("seed") = 42, py::call_guard<py::gil_scoped_release>());
  mod.def(
      "mc_blue",
      [](const std::vector<double>& sigma_z, int m, long trials,
         std::uint64_t seed) {
        return gram::mc_application_metric(gram::BlueMetric{sigma_z, m},
                                           trials, seed);
      },
      py::arg("sigma_z"), py::arg("m"), py::arg("trials"),
      py::arg("seed") = 42, py::call_guard<py::gil_scoped_release>());
  mod.def(
      "mc_lmmse",
      [](const std::vector<double>& sigma_z, int m, double sigma_x2,
         long trials, std::uint64_t seed) {
        return gram::mc_application_metric(
            gram::LmmseMetric{sigma_z, m, sigma_x2}, trials, seed);
      },
      py::arg("sigma_z"), py::arg("m"), py::arg("sigma_x2"),
      py::arg("trials"), py::arg("seed") = 42,
      py::call_guard<py::gil_scoped_release>());
  mod.def(
      "mc_scm",
      [](int m, int n, double lambda, long trials, std::uint64_t seed) {
        return gram::mc_application_metric(
            gram::ScmMetric{m, n, lambda, std::nullopt}, trials, seed);
      },
      py::arg("m"), py::arg("n"), py::arg("lam"), py::arg("trials"),
      py::arg("seed") = 42, py::call_guard<py::gil_scoped_release>());

  py::class_<gram::SeriesValue>(mod, "SeriesValue")
      .def_readonly("value", &gram::SeriesValue::value)
      .def_readonly("last_term", &gram::SeriesValue::last_term);

  mod.def(
      "blue_mse",
      [](const std::vector<double>& sigma_z, int m) {
        return gram::blue_mse(gram::NoiseModel{sigma_z}, m);
      },
      py::arg("sigma_z"), py::arg("m"));
  mod.def(
      "lmmse_mse_high_snr",
      [](const std::vector<double>& sigma_z, int m, double sigma_x2,
         int terms) {
        return gram::lmmse_mse_high_snr(gram::NoiseModel{sigma_z}, m,
                                        sigma_x2, terms);
      },
      py::arg("sigma_z"), py::arg("m"), py::arg("sigma_x2"),
      py::arg("terms"));
  mod.def(
      "lmmse_mse_low_snr",
      [](const std::vector<double>& sigma_z, int m, double sigma_x2,
         int terms) {
        return gram::lmmse_mse_low_snr(gram::NoiseModel{sigma_z}, m,
                                       sigma_x2, terms);
      },
      py::arg("sigma_z"), py::arg("m"), py::arg("sigma_x2"),
      py::arg("terms"));

  py::class_<gram::LossCurve>(mod, "LossCurve")
      .def_readonly("lambdas", &gram::LossCurve::lambdas)
      .def_readonly("losses", &gram::LossCurve::losses)
      .def_readonly("rejected", &gram::LossCurve::rejected)
      .def_readonly("lambda_star", &gram::LossCurve::lambda_star)
      .def_readonly("loss_star", &gram::LossCurve::loss_star);

  mod.def("weight_spectrum", &gram::weight_spectrum, py::arg("lam"),
          py::arg("n"), py::arg("m"));
  mod.def("scm_loss", &gram::scm_loss, py::arg("m"), py::arg("n"),
          py::arg("lam"));
  mod.def("optimize_lambda", &gram::optimize_lambda, py::arg("m"),
          py::arg("n"), py::arg("grid"),
          py::call_guard<py::gil_scoped_release>());
}
