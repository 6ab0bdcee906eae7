#pragma once

#include "anharmonic/numerics.hpp"

#include <string>
#include <string_view>

namespace anharmonic {

/// Constants of H = p^2/2m + m w0^2 x^2 / 2 + lambda x^4.
struct PotentialParams {
  BigReal m;
  BigReal omega0_sq;
  BigReal lambda;
  BigReal hbar;

  /// Decimal inputs as given; precision escalation re-parses these.
  struct Source {
    std::string m, omega0_sq, lambda, hbar;
  } source;

  /// Parses decimal strings under `ctx`; validates m > 0, hbar > 0 and
  /// lambda >= 0 (lambda = 0 is the harmonic limit used for checks).
  static PotentialParams from_strings(const PrecisionContext& ctx, std::string_view m,
                                      std::string_view omega0_sq, std::string_view lambda,
                                      std::string_view hbar = "1");

  /// m = 1/2, w0^2 = 4, lambda = 1/10, hbar = 1.
  static PotentialParams paper(const PrecisionContext& ctx);

  /// Same constants re-parsed under a different precision.
  PotentialParams at(const PrecisionContext& ctx) const;

  const PrecisionContext& context() const { return m.context(); }
  bool is_double_well() const { return omega0_sq.sign() < 0; }
  bool is_harmonic() const { return lambda.is_zero(); }

  double m_d() const { return m.to_double(); }
  double omega0_sq_d() const { return omega0_sq.to_double(); }
  double lambda_d() const { return lambda.to_double(); }
  double hbar_d() const { return hbar.to_double(); }
};

enum class Parity { Even, Odd };

std::string_view to_string(Parity p);

struct TrialEnergy {
  BigReal E;
  Parity parity = Parity::Even;
};

BigReal potential(const PotentialParams& params, const BigReal& x);
/// dV/dx = m w0^2 x + 4 lambda x^3.
BigReal potential_derivative(const PotentialParams& params, const BigReal& x);

/// Positive root of V(x) = E. Throws std::domain_error when E <= 0 with
/// w0^2 >= 0, or when no positive turning point exists.
BigReal turning_point(const PotentialParams& params, const BigReal& E);

/// Positive branch sqrt(2m(V - E)). Throws std::domain_error in the
/// classically allowed region.
BigReal wkb_curve(const PotentialParams& params, const BigReal& E, const BigReal& x);

double potential(const PotentialParams& params, double x);
double turning_point(const PotentialParams& params, double E);

}  // namespace anharmonic
