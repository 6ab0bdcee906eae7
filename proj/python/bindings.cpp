// Python bindings: a thin layer over the C++ core. Results cross the
// boundary as the CLI's JSON documents so every real stays a decimal string.

#include "anharmonic/classify.hpp"
#include "anharmonic/cli.hpp"
#include "anharmonic/model.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/report.hpp"
#include "anharmonic/series.hpp"
#include "anharmonic/solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace py = pybind11;
using namespace anharmonic;

namespace {

struct Params {
  std::string m = "0.5", omega0_sq = "4", lambda = "0.1", hbar = "1";
};

PotentialParams make_params(const Params& p, int digits) {
  return PotentialParams::from_strings(with_precision(digits), p.m, p.omega0_sq, p.lambda, p.hbar);
}

std::string solve_json(int n_lo, int n_hi, const Params& p, int digits, int order,
                       std::optional<std::string> cutoff, const std::string& gap,
                       bool seed_from_oracle) {
  SolverConfig cfg;
  cfg.digits = digits;
  cfg.order = order;
  cfg.cutoff = cutoff;
  cfg.target_gap = gap;
  cfg.seed_from_oracle = seed_from_oracle;
  const PotentialParams params = make_params(p, digits);
  std::vector<CertifiedLevel> levels;
  {
    py::gil_scoped_release release;
    levels = solve_spectrum(params, n_lo, n_hi, cfg);
  }
  return emit_json(params, levels);
}

std::tuple<std::string, int, std::string> classify(int n, const std::string& E, const Params& p,
                                                   const std::string& cutoff, int order,
                                                   int digits) {
  const PrecisionContext ctx = with_precision(digits);
  const PotentialParams params = make_params(p, digits);
  Classification c;
  {
    py::gil_scoped_release release;
    c = classify_energy(params, LevelTarget{n}, BigReal(ctx, E), BigReal(ctx, cutoff), order, ctx);
  }
  return {std::string(to_string(c.verdict)), c.node_count, std::string(to_string(c.limit))};
}

std::vector<double> oracle(const Params& p, int basis) {
  return rayleigh_ritz(make_params(p, 30), basis).energies;
}

std::vector<std::string> coefficients(const std::string& E, bool even, const Params& p, int order,
                                      int digits) {
  const PrecisionContext ctx = with_precision(digits);
  const SeriesState s = build_series(make_params(p, digits),
                                     {BigReal(ctx, E), even ? Parity::Even : Parity::Odd}, order, ctx);
  std::vector<std::string> out;
  for (const BigReal& c : s.coeffs) out.push_back(c.to_scientific(digits));
  return out;
}

std::tuple<int, std::string, std::string> run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release release;
    code = cli::run(args, out, err);
  }
  return {code, out.str(), err.str()};
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Certified eigenvalues of the quartic anharmonic oscillator";

  py::class_<Params>(mod, "Params")
      .def(py::init([](std::string m, std::string omega0_sq, std::string lambda, std::string hbar) {
             return Params{m, omega0_sq, lambda, hbar};
           }),
           py::arg("m") = "0.5", py::arg("omega0_sq") = "4", py::arg("lambda_") = "0.1",
           py::arg("hbar") = "1")
      .def_readwrite("m", &Params::m)
      .def_readwrite("omega0_sq", &Params::omega0_sq)
      .def_readwrite("lambda_", &Params::lambda)
      .def_readwrite("hbar", &Params::hbar);

  mod.def("solve_json", &solve_json, py::arg("n_lo"), py::arg("n_hi"), py::arg("params") = Params{},
          py::arg("digits") = 100, py::arg("order") = 400, py::arg("cutoff") = std::nullopt,
          py::arg("gap") = "1e-32", py::arg("seed_from_oracle") = true,
          "Certified levels n_lo..n_hi as the CLI JSON document.");
  mod.def("classify", &classify, py::arg("n"), py::arg("E"), py::arg("params") = Params{},
          py::arg("cutoff") = "7.5", py::arg("order") = 600, py::arg("digits") = 100,
          "(verdict, node_count, limit) for trial energy E against level n.");
  mod.def("oracle", &oracle, py::arg("params") = Params{}, py::arg("basis") = 200,
          "Uncertified Rayleigh-Ritz energies (double precision).");
  mod.def("coefficients", &coefficients, py::arg("E"), py::arg("even") = true,
          py::arg("params") = Params{}, py::arg("order") = 40, py::arg("digits") = 50,
          "K_n as decimal strings.");
  mod.def("table1", &table1_values, "Table 1 of the paper (30 significant digits).");
  mod.def("run_cli", &run_cli, py::arg("args"), "Run the command line; returns (code, out, err).");
}
