#pragma once

#include "anharmonic/model.hpp"
#include "anharmonic/numerics.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

namespace anharmonic {

/// Empirical truncation control for one evaluation point.
struct TailEstimate {
  int order_used = 0;
  /// log10 of (largest omitted term) / (largest retained term) at x.
  double log10_last_term_ratio = 0.0;
  /// Digits of the partial sum, measured against its largest term, that
  /// truncation leaves intact.
  int trusted_digits = 0;

  double last_term_ratio() const;
};

/// Coefficients of K(x) = sum_n K_n x^(2n) and of dK/dE for one trial
/// energy. Immutable after build_series.
struct SeriesState {
  PotentialParams params;
  TrialEnergy trial;
  PrecisionContext ctx;
  BigReal delta;
  int order = 0;
  std::vector<BigReal> coeffs;
  std::vector<BigReal> dcoeffs;

  // Coefficients N..N+3, used only to estimate the truncation error.
  std::vector<BigReal> lookahead;
  std::vector<BigReal> dlookahead;

  // log10|c_n| and tracked significance, cached for the noise model.
  std::vector<double> log10_coeff;
  std::vector<double> sig_coeff;
  std::vector<double> log10_dcoeff;
  std::vector<double> sig_dcoeff;
};

inline constexpr int kLookahead = 4;

/// Runs the three-term recursion for K_n and dK_n/dE. `delta` defaults to
/// exact zero, which is the only value the solver uses.
SeriesState build_series(const PotentialParams& params, const TrialEnergy& trial, int order,
                         const PrecisionContext& ctx,
                         const std::optional<BigReal>& delta = std::nullopt);

/// L_n for the general recursion; with delta = 0 this is -hbar (n+1) K_{n+1}.
std::vector<BigReal> l_coefficients(const SeriesState& s);

/// K, K', K'' (and optionally dK/dE) at one point with their noise floors.
/// Noise is log10 of an absolute bound combining tracked rounding and the
/// truncation estimate.
struct PointEval {
  BigReal x;
  Real K, dK, d2K;
  double noise_K = 0, noise_dK = 0, noise_d2K = 0;
  TailEstimate tail;

  bool K_resolved() const;   // |K| above its noise floor
  bool dK_resolved() const;
  int dK_sign() const;       // 0 when |K'| is within noise
};

enum class Derivs { K, KdK, All };

PointEval evaluate(const SeriesState& s, const BigReal& x, Derivs which = Derivs::All);

/// Truncation adequacy rule: the largest omitted term at the cutoff must be
/// below 10^-(digits+5) of the largest retained one.
bool tail_adequate(const TailEstimate& tail, int digits);

struct KValue {
  BigReal value;
  TailEstimate tail;
  double log10_noise = 0;
};

KValue eval_K(const SeriesState& s, const BigReal& x);
KValue eval_dKdE(const SeriesState& s, const BigReal& x);
BigReal eval_density(const SeriesState& s, const BigReal& x);

class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// L/K = -(hbar/2) K'/K. Throws PoleError when |K| is within noise.
BigReal eval_ratio(const SeriesState& s, const BigReal& x);
BigReal ratio_from(const SeriesState& s, const PointEval& p);

/// Abscissae for node and sink scans on (0, a]: step a/1000, shortened in the
/// allowed region to a quarter of the local de Broglie half-wavelength.
std::vector<BigReal> scan_grid(const PotentialParams& params, const BigReal& E,
                               const BigReal& a);

struct ZeroScan {
  std::vector<BigReal> zeros;
  bool near_miss = false;
  std::optional<BigReal> near_miss_at;
  bool untrusted = false;
  int grid_points = 0;
};

/// Nodes of the wavefunction in (0, a]. K = psi^2 with Delta = 0, so nodes
/// are double zeros of K: they are located as -/+ sign changes of K' and
/// certified by K ~ 0 together with psi'^2 > 0.
ZeroScan find_zeros(const SeriesState& s, const BigReal& a, const PrecisionContext& ctx);

// ---------------------------------------------------------------- diagnostics

struct Residual {
  BigReal value;
  double log10_floor = 0;  // first-order noise bound for `value`

  bool within_floor() const;
};

/// L^2 - hbar (L'K - K'L) - 2m K^2 (V - E) with L = -(hbar/2) K'.
Residual conservation_residual(const SeriesState& s, const BigReal& x);
/// hbar (L/K)' - (L/K)^2 + 2m (V - E).
Residual riccati_residual(const SeriesState& s, const BigReal& x);
/// Intercept of a linear fit of (x - x0) (L/K) at x0 +- eps, +- 2 eps.
BigReal fit_residue(const SeriesState& s, const BigReal& x0, const BigReal& eps);

struct SuppressionStats {
  double sup_ratio = 0;   // sup |K_{n+1}/K_n| (n+1)^{2/3}
  int sup_index = -1;
  double envelope = 0;    // sup (|K_n| (n!)^{2/3})^{1/n}
};

SuppressionStats suppression_stats(const SeriesState& s, int n_lo, int n_hi);

/// One line per coefficient: `n TAB K_n TAB dK_n/dE`.
void dump_coefficients(const SeriesState& s, std::ostream& out, int sig_digits);

}  // namespace anharmonic
