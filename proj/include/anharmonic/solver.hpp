#pragma once

#include "anharmonic/classify.hpp"
#include "anharmonic/model.hpp"
#include "anharmonic/numerics.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace anharmonic {

struct SolverConfig {
  int order = 400;
  std::optional<std::string> cutoff;  // decimal; unset selects the auto cutoff
  int digits = 100;
  std::string target_gap = "1e-32";
  int max_escalations = 8;
  int newton_max_steps = 60;
  bool seed_from_oracle = true;
  bool allow_double_well = false;

  /// N = 400, a = 7.5, digits = 100, gap = 1e-32.
  static SolverConfig paper();
  /// Throws std::invalid_argument unless target_gap > 10^-(digits-20) and
  /// the numeric fields are in range.
  void validate() const;
};

struct Provenance {
  int order = 0;
  std::string cutoff;
  int digits = 0;
  int escalations = 0;
  std::vector<std::string> escalation_causes;
  int classifications = 0;
  int newton_steps = 0;
  std::string seed;  // "oracle" or "semiclassical"
};

struct CertifiedLevel {
  int n = 0;
  bool certified = false;
  std::string failure;
  Limit failure_limit = Limit::None;

  BigReal E_lo, E_hi, gap;
  int digits_reported = 0;
  /// Significance of the Newton root: log10|E*| - log10(resolution), where
  /// the resolution sqrt(noise / c) is set by the noise floor of K(a, E) and
  /// its curvature c at the double root. NaN when Newton never converged.
  double newton_significance = 0;
  /// Tracked significance of the last productive Newton iterate (diagnostic).
  double newton_iterate_significance = 0;
  std::optional<BigReal> newton_root;

  Provenance provenance;
  std::vector<double> gap_history;  // log10 gap after every update
  std::vector<std::string> log;     // one trace line per classification

  BigReal midpoint() const { return (E_lo + E_hi) / 2; }
};

using TraceSink = std::function<void(const std::string&)>;

/// Initial energy guess for level n: oracle (Rayleigh-Ritz) when requested
/// and available, otherwise Bohr-Sommerfeld.
double seed_energy(const PotentialParams& params, int n, bool use_oracle, std::string* source);

/// The cutoff actually used: cfg.cutoff, else max(2.5 x_t(E_guess), 7.5 for
/// the paper parameters).
std::string resolve_cutoff(const PotentialParams& params, int n_max, const SolverConfig& cfg);

struct Bracket {
  BigReal lo, hi;
};

/// Widens around the seed until lo is Below and hi is Above.
/// Throws std::runtime_error when escalation is exhausted.
Bracket bracket_level(const PotentialParams& params, int n, const SolverConfig& cfg);

CertifiedLevel refine_level(const PotentialParams& params, int n, const Bracket& bracket,
                            const SolverConfig& cfg, const TraceSink& trace = {});

/// Bracket + refine for one level (never throws; failures are recorded).
CertifiedLevel solve_level(const PotentialParams& params, int n, const SolverConfig& cfg,
                           const TraceSink& trace = {});

/// Levels n_lo..n_hi, solved concurrently; each result independent.
std::vector<CertifiedLevel> solve_spectrum(const PotentialParams& params, int n_lo, int n_hi,
                                           const SolverConfig& cfg, const TraceSink& trace = {});

}  // namespace anharmonic
