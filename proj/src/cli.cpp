#include "anharmonic/cli.hpp"

#include "anharmonic/classify.hpp"
#include "anharmonic/model.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/report.hpp"
#include "anharmonic/series.hpp"
#include "anharmonic/solver.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace anharmonic::cli {

namespace {

/// Raised for bad flag values after CLI11 parsing succeeded.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::string> m, omega0_sq, lambda, hbar;
  std::string levels = "0..9";
  std::optional<int> digits, order;
  std::optional<std::string> cutoff, gap;
  std::string format = "table";
  std::optional<std::string> preset;
  bool double_well = false;
  bool seed_from_oracle = true;
  bool trace = false;
  int basis = 200;
  int level = 0;
  std::optional<std::string> x_min, x_max;
  int count = 301;
  bool dump_coefficients = false;
};

void structured_error(std::ostream& err, std::string_view kind, std::string_view message) {
  ordered_json e;
  e["error"] = kind;
  e["message"] = message;
  err << e.dump() << "\n";
}

std::string require_decimal(const std::optional<std::string>& v, const char* fallback,
                            const char* flag) {
  const std::string text = v ? *v : fallback;
  if (!is_decimal_literal(text)) {
    throw UsageError(std::string(flag) + ": '" + text + "' is not a decimal number");
  }
  return text;
}

std::pair<int, int> parse_levels(const std::string& text) {
  static const std::regex range(R"(^\s*(\d+)\s*(?:\.\.\s*(\d+))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, range)) {
    throw UsageError("--levels: expected A..B or A, got '" + text + "'");
  }
  const int lo = std::stoi(m[1]);
  const int hi = m[2].matched ? std::stoi(m[2]) : lo;
  if (hi < lo) throw UsageError("--levels: upper end below lower end");
  if (hi > 200) throw UsageError("--levels: levels above 200 are not supported");
  return {lo, hi};
}

SolverConfig solver_config(const Options& o) {
  SolverConfig cfg = o.preset ? SolverConfig::paper() : SolverConfig{};
  if (o.digits) cfg.digits = *o.digits;
  if (o.order) cfg.order = *o.order;
  if (o.cutoff) cfg.cutoff = require_decimal(o.cutoff, "", "--cutoff");
  if (o.gap) cfg.target_gap = require_decimal(o.gap, "", "--gap");
  cfg.seed_from_oracle = o.seed_from_oracle;
  cfg.allow_double_well = o.double_well;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

PotentialParams potential_params(const Options& o, int digits) {
  const PrecisionContext ctx = with_precision(digits);
  try {
    return PotentialParams::from_strings(ctx, require_decimal(o.m, "0.5", "--m"),
                                         require_decimal(o.omega0_sq, "4", "--omega0-sq"),
                                         require_decimal(o.lambda, "0.1", "--lambda"),
                                         require_decimal(o.hbar, "1", "--hbar"));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

TraceSink trace_sink(const Options& o, std::ostream& err) {
  if (!o.trace) return {};
  return [&err](const std::string& line) { err << line << "\n"; };
}

/// Double-well parameters are refused unless explicitly enabled.
void guard_double_well(const PotentialParams& params, const Options& o) {
  if (params.is_double_well() && !o.double_well) {
    throw std::domain_error(
        "omega0_sq < 0 is a double well; node counting is not validated there "
        "(pass --experimental-double-well to try anyway)");
  }
}

std::string render(const PotentialParams& params, const std::vector<CertifiedLevel>& levels,
                   const std::string& format, bool compare_table1) {
  if (format == "json") return emit_json(params, levels);
  if (format == "csv") return emit_csv(levels);
  return emit_table(levels, compare_table1);
}

int report_failures(const std::vector<CertifiedLevel>& levels, std::ostream& err) {
  int code = kOk;
  for (const CertifiedLevel& l : levels) {
    if (l.certified) continue;
    structured_error(err, "certification_failure",
                     "level " + std::to_string(l.n) + ": " + l.failure);
    code = kCertificationFailure;
  }
  return code;
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const SolverConfig cfg = solver_config(o);
  const auto [lo, hi] = parse_levels(o.levels);
  const PotentialParams params = potential_params(o, cfg.digits);
  guard_double_well(params, o);
  const auto levels = solve_spectrum(params, lo, hi, cfg, trace_sink(o, err));
  out << render(params, levels, o.format, false);
  return report_failures(levels, err);
}

int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.m || o.omega0_sq || o.lambda || o.hbar) {
    throw UsageError("reproduce-table1 uses the fixed paper parameters; use `solve` instead");
  }
  Options fixed = o;
  fixed.preset = "paper";
  const SolverConfig cfg = solver_config(fixed);
  const PotentialParams params = PotentialParams::paper(with_precision(cfg.digits));
  const auto levels = solve_spectrum(params, 0, 9, cfg, trace_sink(o, err));
  out << render(params, levels, o.format, true);
  int code = report_failures(levels, err);
  for (const CertifiedLevel& l : levels) {
    if (l.certified && render_midpoint(l, 30) != table1_values()[l.n]) {
      structured_error(err, "table1_mismatch", "level " + std::to_string(l.n) + ": " +
                                                   render_midpoint(l, 30) + " vs " +
                                                   table1_values()[l.n]);
      code = kCertificationFailure;
    }
  }
  return code;
}

int cmd_oracle(const Options& o, std::ostream& out, std::ostream& err) {
  const auto [lo, hi] = parse_levels(o.levels);
  if (o.basis < 20) throw UsageError("--basis must be >= 20");
  if (hi >= o.basis / 2) throw UsageError("--levels must stay below basis/2");
  const PotentialParams params = potential_params(o, 30);
  guard_double_well(params, o);
  std::optional<double> freq;
  if (params.omega0_sq_d() <= 0.0) freq = std::max(1.0, std::cbrt(params.lambda_d() * 8));
  const OracleSpectrum spec = rayleigh_ritz(params, o.basis, freq);
  err << ordered_json{{"warning", "oracle values are double-precision estimates, not certified"}}
             .dump()
      << "\n";
  if (o.format == "json") {
    out << emit_oracle_json(params, spec, lo, hi);
    return kOk;
  }
  const bool csv = o.format == "csv";
  out << (csv ? "n,E,est_error,certified\n" : "n    E (Rayleigh-Ritz, uncertified)   est_error\n");
  for (int n = lo; n <= hi; ++n) {
    std::ostringstream row;
    row.precision(15);
    if (csv) {
      row << n << ',' << spec.energies[n] << ',' << spec.est_error[n] << ",false";
    } else {
      row << n << "    " << spec.energies[n] << "    " << spec.est_error[n];
    }
    out << row.str() << "\n";
  }
  return kOk;
}

int cmd_density(const Options& o, std::ostream& out, std::ostream& err) {
  const SolverConfig cfg = solver_config(o);
  if (o.level < 0) throw UsageError("--level must be >= 0");
  if (o.count < 2) throw UsageError("--count must be >= 2");
  PotentialParams params = potential_params(o, cfg.digits);
  guard_double_well(params, o);
  const auto levels = solve_spectrum(params, o.level, o.level, cfg, trace_sink(o, err));
  const CertifiedLevel& level = levels.front();
  if (!level.certified) return report_failures(levels, err);

  const PrecisionContext ctx = with_precision(level.provenance.digits);
  params = params.at(ctx);
  const BigReal E = BigReal::parse(ctx, render_midpoint(level, level.digits_reported + 3));
  const SeriesState s = build_series(params, {E, LevelTarget{o.level}.parity()},
                                     level.provenance.order, ctx);
  out << "# level " << level.n << " E=" << render_midpoint(level, 30) << " order "
      << level.provenance.order << " cutoff " << level.provenance.cutoff << "\n";
  if (o.dump_coefficients) {
    out << "# n\tK_n\tdK_n/dE\n";
    dump_coefficients(s, out, 30);
    return kOk;
  }
  const std::string& a = level.provenance.cutoff;
  const BigReal x0 = BigReal::parse(ctx, require_decimal(o.x_min, ("-" + a).c_str(), "--x-min"));
  const BigReal x1 = BigReal::parse(ctx, require_decimal(o.x_max, a.c_str(), "--x-max"));
  if (!(x1 - x0).sign()) throw UsageError("--x-min and --x-max must differ");
  const BigReal cutoff = BigReal::parse(ctx, a);
  if (abs(x0).to_double() > cutoff.to_double() || abs(x1).to_double() > cutoff.to_double()) {
    err << ordered_json{{"warning", "sampling beyond the cutoff; the tail estimate may be untrusted"}}
               .dump()
        << "\n";
  }
  const BigReal step = (x1 - x0) / (o.count - 1);
  out << "# x\t|K(x)|\n";
  for (int i = 0; i < o.count; ++i) {
    const BigReal x = (x0 + step * i).as_exact();
    std::ostringstream abscissa;
    abscissa << std::fixed << std::setprecision(10) << x.to_double();
    out << abscissa.str() << "\t" << eval_density(s, x).to_scientific(20) << "\n";
  }
  return kOk;
}

/// Lightweight invariant suite; one PASS/FAIL line per check.
int cmd_check(const Options& o, std::ostream& out, std::ostream& err) {
  (void)o;
  struct Check {
    std::string name;
    std::function<std::string()> body;  // empty string on success
  };
  const PrecisionContext ctx = with_precision(100);
  const PotentialParams paper = PotentialParams::paper(ctx);
  const PotentialParams harmonic = PotentialParams::from_strings(ctx, "0.5", "4", "0", "1");

  std::vector<Check> checks{
      {"harmonic coefficients K_n = (-1)^n/n!",
       [&]() -> std::string {
         const SeriesState s = build_series(harmonic, {BigReal(ctx, 1), Parity::Even}, 60, ctx);
         BigReal expect(ctx, 1);
         for (int n = 0; n < 60; ++n) {
           const double rel = (s.coeffs[n] - expect).log10_abs() - expect.log10_abs();
           if (!(s.coeffs[n] - expect).is_zero() && rel > -80) {
             return "n=" + std::to_string(n) + " relative error 1e" + std::to_string(rel);
           }
           expect = -expect / BigReal(ctx, n + 1);
         }
         return {};
       }},
      {"conservation residual within its noise floor",
       [&]() -> std::string {
         for (const char* e : {"1.0", "3.3", "8.4"}) {
           for (Parity p : {Parity::Even, Parity::Odd}) {
             const SeriesState s = build_series(paper, {BigReal(ctx, e), p}, 400, ctx);
             for (const char* x : {"0.3", "1.7", "3.1", "4.4"}) {
               const Residual r = conservation_residual(s, BigReal(ctx, x));
               if (!r.within_floor()) return std::string("E=") + e + " x=" + x;
             }
           }
         }
         return {};
       }},
      {"Riccati residual below 1e-50",
       [&]() -> std::string {
         for (const char* e : {"0.5", "1.0"}) {
           const SeriesState s = build_series(paper, {BigReal(ctx, e), Parity::Even}, 400, ctx);
           for (const char* x : {"0.4", "1.2", "2.5", "3.5"}) {
             const Residual r = riccati_residual(s, BigReal(ctx, x));
             if (!r.value.is_zero() && r.value.log10_abs() > -50) {
               return std::string("E=") + e + " x=" + x;
             }
           }
         }
         return {};
       }},
      {"residue of L/K at a node is -hbar",
       [&]() -> std::string {
         const SeriesState s = build_series(harmonic, {BigReal(ctx, 5), Parity::Even}, 200, ctx);
         const BigReal x0 = sqrt(BigReal(ctx, "0.5"));
         const BigReal r = fit_residue(s, x0, BigReal(ctx, "1e-8"));
         const double dev = (r + BigReal(ctx, 1)).log10_abs();
         return dev < -6 ? std::string() : "deviation 1e" + std::to_string(dev);
       }},
      {"classification brackets E_0 of Table 1",
       [&]() -> std::string {
         const BigReal e0(ctx, table1_values()[0]);
         const BigReal a(ctx, "7.5");
         const BigReal d(ctx, "1e-20");
         const auto below = classify_energy(paper, {0}, e0 - d, a, 400, ctx);
         const auto above = classify_energy(paper, {0}, e0 + d, a, 400, ctx);
         if (below.verdict != Verdict::Below || above.verdict != Verdict::Above) {
           return std::string(to_string(below.verdict)) + "/" + std::string(to_string(above.verdict));
         }
         return {};
       }},
      {"oracle is variational and agrees with Table 1 to 1e-8",
       [&]() -> std::string {
         const OracleSpectrum small = rayleigh_ritz(paper, 100);
         const OracleSpectrum big = rayleigh_ritz(paper, 200);
         for (int n = 0; n < 10; ++n) {
           if (big.energies[n] > small.energies[n] + 1e-12) return "n=" + std::to_string(n);
           if (std::fabs(big.energies[n] - std::stod(table1_values()[n])) > 1e-8) {
             return "table mismatch n=" + std::to_string(n);
           }
         }
         return {};
       }},
      {"JSON round-trip is byte-identical",
       [&]() -> std::string {
         SolverConfig cfg;
         cfg.digits = 60;
         cfg.target_gap = "1e-20";
         const PotentialParams h = harmonic.at(with_precision(cfg.digits));
         const std::string text = emit_json(h, solve_spectrum(h, 1, 1, cfg));
         return reemit_json(text) == text ? std::string() : "re-emitted text differs";
       }},
  };

  int failures = 0;
  for (const Check& c : checks) {
    std::string problem;
    try {
      problem = c.body();
    } catch (const std::exception& e) {
      problem = std::string("exception: ") + e.what();
    }
    out << (problem.empty() ? "PASS " : "FAIL ") << c.name
        << (problem.empty() ? "" : " (" + problem + ")") << "\n";
    if (!problem.empty()) {
      ++failures;
      structured_error(err, "check_failure", c.name + ": " + problem);
    }
  }
  return failures ? kCertificationFailure : kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified eigenvalues of the quartic anharmonic oscillator", "anharmonic"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;

  app.add_option("--m", o.m, "mass m (decimal)");
  app.add_option("--omega0-sq", o.omega0_sq, "omega0^2 (decimal)");
  app.add_option("--lambda", o.lambda, "quartic coupling lambda >= 0 (decimal)");
  app.add_option("--hbar", o.hbar, "Planck constant (decimal)");
  app.add_option("--levels", o.levels, "level range A..B or a single level A")->capture_default_str();
  app.add_option("--digits", o.digits, "working precision in decimal digits (>= 30)");
  app.add_option("--order", o.order, "series order N");
  app.add_option("--cutoff", o.cutoff, "cutoff a (decimal); default chosen from the levels");
  app.add_option("--gap", o.gap, "target gap E_hi - E_lo (decimal)");
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}))
      ->capture_default_str();
  app.add_option("--preset", o.preset, "parameter/solver preset")->check(CLI::IsMember({"paper"}));
  app.add_flag("--experimental-double-well", o.double_well, "allow omega0^2 < 0");
  app.add_flag("--seed-from-oracle,!--no-seed-from-oracle", o.seed_from_oracle,
               "seed levels from Rayleigh-Ritz (default on)");
  app.add_flag("--trace", o.trace, "one line per classification on stderr");

  CLI::App* solve = app.add_subcommand("solve", "certified levels");
  CLI::App* reproduce = app.add_subcommand("reproduce-table1", "reproduce Table 1 of the paper");
  CLI::App* oracle = app.add_subcommand("oracle", "Rayleigh-Ritz estimates (uncertified)");
  oracle->add_option("--basis", o.basis, "harmonic basis size")->capture_default_str();
  CLI::App* density = app.add_subcommand("density", "sample |K(x)| for a solved level");
  density->add_option("--level", o.level, "level index")->capture_default_str();
  density->add_option("--x-min", o.x_min, "first abscissa (default -cutoff)");
  density->add_option("--x-max", o.x_max, "last abscissa (default cutoff)");
  density->add_option("--count", o.count, "number of samples")->capture_default_str();
  density->add_flag("--dump-coefficients", o.dump_coefficients,
                    "print n, K_n, dK_n/dE instead of the density");
  CLI::App* check = app.add_subcommand("check", "run the invariant suite");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kOk;
    }
    structured_error(err, "invalid_flags", e.what());
    return kInvalidFlags;
  }

  try {
    if (*solve) return cmd_solve(o, out, err);
    if (*reproduce) return cmd_reproduce(o, out, err);
    if (*oracle) return cmd_oracle(o, out, err);
    if (*density) return cmd_density(o, out, err);
    if (*check) return cmd_check(o, out, err);
  } catch (const UsageError& e) {
    structured_error(err, "invalid_flags", e.what());
    return kInvalidFlags;
  } catch (const std::domain_error& e) {
    structured_error(err, "refused", e.what());
    return kCertificationFailure;
  } catch (const std::exception& e) {
    structured_error(err, "failure", e.what());
    return kCertificationFailure;
  }
  return kInvalidFlags;
}

}  // namespace anharmonic::cli
