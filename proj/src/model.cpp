#include "anharmonic/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace anharmonic {

PotentialParams PotentialParams::from_strings(const PrecisionContext& ctx, std::string_view m,
                                              std::string_view omega0_sq,
                                              std::string_view lambda, std::string_view hbar) {
  PotentialParams p{BigReal::parse(ctx, m), BigReal::parse(ctx, omega0_sq),
                    BigReal::parse(ctx, lambda), BigReal::parse(ctx, hbar),
                    Source{std::string(m), std::string(omega0_sq), std::string(lambda),
                           std::string(hbar)}};
  if (p.m.sign() <= 0) throw std::invalid_argument("mass must be positive");
  if (p.hbar.sign() <= 0) throw std::invalid_argument("hbar must be positive");
  if (p.lambda.sign() < 0) throw std::invalid_argument("lambda must be non-negative");
  return p;
}

PotentialParams PotentialParams::paper(const PrecisionContext& ctx) {
  return from_strings(ctx, "0.5", "4", "0.1", "1");
}

PotentialParams PotentialParams::at(const PrecisionContext& ctx) const {
  return from_strings(ctx, source.m, source.omega0_sq, source.lambda, source.hbar);
}

std::string_view to_string(Parity p) { return p == Parity::Even ? "even" : "odd"; }

BigReal potential(const PotentialParams& params, const BigReal& x) {
  const BigReal x2 = x * x;
  const BigReal harmonic = params.m * params.omega0_sq * x2 / 2;
  return harmonic + params.lambda * x2 * x2;
}

BigReal potential_derivative(const PotentialParams& params, const BigReal& x) {
  return params.m * params.omega0_sq * x + 4 * params.lambda * x * x * x;
}

BigReal turning_point(const PotentialParams& params, const BigReal& E) {
  const PrecisionContext& ctx = E.context();
  if (params.omega0_sq.sign() >= 0 && E.sign() <= 0) {
    throw std::domain_error("turning_point: no positive turning point for E <= 0");
  }
  const BigReal half_mw = params.m * params.omega0_sq / 2;
  if (params.lambda.is_zero()) {
    if (half_mw.sign() <= 0) throw std::domain_error("turning_point: unbounded potential");
    return sqrt(E / half_mw);
  }
  // u = x^2 solves lambda u^2 + (m w0^2 / 2) u - E = 0.
  const BigReal disc = half_mw * half_mw + 4 * params.lambda * E;
  if (disc.sign() < 0) throw std::domain_error("turning_point: E below the potential minimum");
  const BigReal root = sqrt(disc);
  // Rationalised form avoids cancellation when lambda E << (m w0^2)^2.
  BigReal u(ctx);
  if (half_mw.sign() >= 0) {
    u = 2 * E / (half_mw + root);
  } else {
    u = (root - half_mw) / (2 * params.lambda);
  }
  if (u.sign() <= 0) throw std::domain_error("turning_point: no positive turning point");
  return sqrt(u);
}

BigReal wkb_curve(const PotentialParams& params, const BigReal& E, const BigReal& x) {
  const BigReal excess = potential(params, x) - E;
  if (excess.sign() < 0) {
    throw std::domain_error("wkb_curve: undefined in the classically allowed region");
  }
  return sqrt(2 * params.m * excess);
}

double potential(const PotentialParams& params, double x) {
  const double x2 = x * x;
  return 0.5 * params.m_d() * params.omega0_sq_d() * x2 + params.lambda_d() * x2 * x2;
}

double turning_point(const PotentialParams& params, double E) {
  const double half_mw = 0.5 * params.m_d() * params.omega0_sq_d();
  const double lam = params.lambda_d();
  if (lam == 0.0) {
    if (half_mw <= 0.0 || E <= 0.0) throw std::domain_error("turning_point: no turning point");
    return std::sqrt(E / half_mw);
  }
  const double disc = half_mw * half_mw + 4.0 * lam * E;
  if (disc < 0.0) throw std::domain_error("turning_point: E below the potential minimum");
  const double root = std::sqrt(disc);
  const double u = half_mw >= 0.0 ? 2.0 * E / (half_mw + root) : (root - half_mw) / (2.0 * lam);
  if (!(u > 0.0)) throw std::domain_error("turning_point: no positive turning point");
  return std::sqrt(u);
}

}  // namespace anharmonic
