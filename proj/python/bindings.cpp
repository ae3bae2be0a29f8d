#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "contagion/calibration.hpp"
#include "contagion/cascade.hpp"
#include "contagion/distributions.hpp"
#include "contagion/meanfield.hpp"
#include "contagion/netgen.hpp"

namespace py = pybind11;
using namespace contagion;

namespace {

LocationScaleDistribution dist_of(const std::string& spec) { return LocationScaleDistribution::parse(spec); }

py::dict root_dict(const meanfield::Root& r) {
  py::dict d;
  d["p"] = r.p;
  d["stability"] = meanfield::to_string(r.stability);
  d["slope"] = r.slope;
  return d;
}

}  // namespace

PYBIND11_MODULE(_contagion, m) {
  m.doc() = "Interbank contagion: mean-field solver, cascade simulator and calibration scan.";

  py::register_exception<meanfield::NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

  py::class_<LocationScaleDistribution>(m, "Distribution")
      .def(py::init(&dist_of), py::arg("spec") = "normal")
      .def_property_readonly("name", &LocationScaleDistribution::name)
      .def("cdf", &LocationScaleDistribution::cdf)
      .def("sf", &LocationScaleDistribution::sf)
      .def("pdf", &LocationScaleDistribution::pdf)
      .def("quantile", &LocationScaleDistribution::quantile)
      .def("__repr__", [](const LocationScaleDistribution& d) { return "Distribution('" + d.name() + "')"; });

  m.def(
      "iterate_map",
      [](double a, double b, double p, const std::string& dist) {
        return meanfield::iterate_map({a, b, dist_of(dist)}, p);
      },
      py::arg("a"), py::arg("b"), py::arg("p"), py::arg("dist") = "normal");

  m.def(
      "solve_fixed_point",
      [](double a, double b, double p0, const std::string& dist) {
        const meanfield::MeanFieldParams prm{a, b, dist_of(dist)};
        prm.validate();
        const auto r = meanfield::solve_fixed_point(prm, p0);
        return py::make_tuple(r.p, r.iterations);
      },
      py::arg("a"), py::arg("b"), py::arg("p0") = 1.0, py::arg("dist") = "normal",
      "Returns (p, iterations). Raises NonConvergence near a tangency.");

  m.def(
      "classify_fixed_points",
      [](double a, double b, const std::string& dist) {
        const auto sol = meanfield::classify_fixed_points({a, b, dist_of(dist)});
        py::list roots;
        for (const auto& r : sol.roots) roots.append(root_dict(r));
        py::dict d;
        d["roots"] = roots;
        d["regime"] = meanfield::to_string(sol.regime);
        d["b_critical"] = sol.b_critical;
        d["bounds"] = sol.bounds ? py::object(py::make_tuple(sol.bounds->first, sol.bounds->second)) : py::none();
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("dist") = "normal");

  m.def(
      "critical_coupling", [](const std::string& dist) { return meanfield::critical_coupling(dist_of(dist)); },
      py::arg("dist") = "normal");

  m.def(
      "hysteresis_bounds",
      [](double b, const std::string& dist) { return meanfield::hysteresis_bounds(b, dist_of(dist)); },
      py::arg("b"), py::arg("dist") = "normal", "(a1, a2), or None when b <= b_c.");

  m.def(
      "hysteresis_sweep",
      [](double b, const std::vector<double>& a_grid, const std::string& dist) {
        const auto h = meanfield::hysteresis_sweep(b, a_grid, dist_of(dist));
        return py::make_tuple(h.forward, h.backward);
      },
      py::arg("b"), py::arg("a_grid"), py::arg("dist") = "normal", "Returns (forward, backward).");

  m.def(
      "phase_diagram",
      [](const std::vector<double>& a_grid, const std::vector<double>& b_grid, double p0, const std::string& dist) {
        const auto pd = meanfield::phase_diagram(a_grid, b_grid, p0, dist_of(dist));
        std::vector<std::vector<double>> rows(a_grid.size());
        for (std::size_t i = 0; i < a_grid.size(); ++i) {
          for (std::size_t j = 0; j < b_grid.size(); ++j) rows[i].push_back(pd.at(i, j));
        }
        return rows;
      },
      py::arg("a_grid"), py::arg("b_grid"), py::arg("p0") = 1.0, py::arg("dist") = "normal",
      "Nested list indexed [a][b].");

  m.def(
      "leverage_min",
      [](double theta, double sigma_frac, const std::string& dist) {
        return meanfield::leverage_min(theta, sigma_frac, dist_of(dist));
      },
      py::arg("theta"), py::arg("sigma_frac"), py::arg("dist") = "normal");

  m.def(
      "simulate",
      [](std::size_t banks, const std::string& network, double theta, double mu_A, double sigma_A, double mu_L,
         double sigma_L, double q, const std::string& recovery, const std::string& dist, std::size_t trials,
         std::uint64_t seed) {
        cascade::BankParams bp{banks, mu_A, sigma_A, mu_L, sigma_L, dist_of(dist)};
        cascade::CascadeConfig cfg;
        cfg.theta = theta;
        cfg.q = q;
        cfg.recovery = cascade::parse_recovery(recovery);
        cfg.validate();
        const auto spec = netgen::NetworkSpec::parse(network, banks);
        cascade::EnsembleStats stats;
        {
          py::gil_scoped_release release;
          stats = cascade::monte_carlo(spec, bp, cfg, trials, seed);
        }
        py::dict d;
        d["mean_p"] = stats.mean_p;
        d["std_p"] = stats.std_p;
        d["p"] = stats.p;
        d["rounds"] = stats.rounds;
        d["histogram"] = stats.histogram;
        d["round_limit_hits"] = stats.round_limit_hits;
        d["p_meanfield"] = meanfield::solve_fixed_point(cascade::bridge_params(bp, theta), 1.0).p;
        return d;
      },
      py::arg("banks") = 500, py::arg("network") = "er:0.1", py::arg("theta") = 0.3, py::arg("mu_A") = 1000.0,
      py::arg("sigma_A") = 30.0, py::arg("mu_L") = 890.0, py::arg("sigma_L") = 50.0, py::arg("q") = 0.0,
      py::arg("recovery") = "monotone", py::arg("dist") = "normal", py::arg("trials") = 100,
      py::arg("seed") = 0);

  py::class_<calibration::CalibrationSummary>(m, "CalibrationSummary")
      .def_readonly("country", &calibration::CalibrationSummary::country)
      .def_readonly("year", &calibration::CalibrationSummary::year)
      .def_readonly("mu_A", &calibration::CalibrationSummary::mu_A)
      .def_readonly("std_A", &calibration::CalibrationSummary::std_A)
      .def_readonly("mu_E", &calibration::CalibrationSummary::mu_E)
      .def_readonly("std_E", &calibration::CalibrationSummary::std_E)
      .def_readonly("leverage", &calibration::CalibrationSummary::leverage)
      .def_readonly("n_banks", &calibration::CalibrationSummary::n_banks);

  m.def(
      "calibrate",
      [](const std::string& path, const std::string& country, int year) {
        return calibration::summarize(calibration::load_balance_sheets_file(path), country, year);
      },
      py::arg("path"), py::arg("country"), py::arg("year"));

  m.def(
      "stability_scan",
      [](const calibration::CalibrationSummary& s, const std::vector<double>& thetas, const std::vector<double>& fs,
         double p0, const std::string& dist) {
        py::list rows;
        for (const auto& pt : calibration::stability_scan(s, thetas, fs, dist_of(dist), p0)) {
          rows.append(py::make_tuple(pt.theta, pt.f, pt.a, pt.b, pt.p));
        }
        return rows;
      },
      py::arg("summary"), py::arg("thetas"), py::arg("fs"), py::arg("p0") = 1.0, py::arg("dist") = "normal",
      "List of (theta, f, a, b, p), row-major over theta then f.");
}
