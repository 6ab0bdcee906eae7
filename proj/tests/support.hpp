#pragma once
// Shared helpers for the unit tests. Oracles here are written independently
// of the library code paths they check.

#include "anharmonic/numerics.hpp"
#include "anharmonic/model.hpp"
#include "anharmonic/solver.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <mpfr.h>

#include <string>
#include <vector>

namespace testing_support {

using Rational = boost::multiprecision::cpp_rational;

inline const anharmonic::PrecisionContext& ctx100() {
  static const anharmonic::PrecisionContext ctx = anharmonic::with_precision(100);
  return ctx;
}

inline anharmonic::PotentialParams paper_params() {
  return anharmonic::PotentialParams::paper(ctx100());
}

/// m = 1/2, w0 = 2, lambda = 0, hbar = 1: E_n = 2n + 1 exactly.
inline anharmonic::PotentialParams harmonic_params(const anharmonic::PrecisionContext& ctx = ctx100()) {
  return anharmonic::PotentialParams::from_strings(ctx, "0.5", "4", "0", "1");
}

inline anharmonic::BigReal big(const char* text) { return anharmonic::BigReal(ctx100(), text); }
inline anharmonic::BigReal big(const std::string& text) { return big(text.c_str()); }

/// log10 |a - b| / |b| (or log10 |a - b| when b == 0).
inline double rel_error(const anharmonic::BigReal& a, const anharmonic::BigReal& b) {
  const anharmonic::BigReal d = a - b;
  if (d.is_zero()) return -1e9;
  return b.is_zero() ? d.log10_abs() : d.log10_abs() - b.log10_abs();
}

/// Rational -> BigReal via exact numerator / denominator strings.
inline anharmonic::BigReal from_rational(const Rational& q) {
  const anharmonic::BigReal num(ctx100(), boost::multiprecision::numerator(q).str());
  const anharmonic::BigReal den(ctx100(), boost::multiprecision::denominator(q).str());
  return num / den;
}

/// Exact K_n from the Eq. (4) recursion as written in the specification,
/// general Delta, with rational parameters. Independent of series.cpp.
inline std::vector<Rational> exact_coefficients(const Rational& m, const Rational& w02,
                                                const Rational& lambda, const Rational& hbar,
                                                const Rational& E, bool even, int count,
                                                const Rational& delta = 0) {
  std::vector<Rational> K(count, Rational(0));
  if (even) {
    K[0] = 1;
    K[1] = -(2 * m * K[0] / (hbar * hbar)) * (delta * hbar / 2 + E);
  } else {
    K[0] = 0;
    K[1] = 1;
  }
  for (int n = 0; n + 2 < count; ++n) {
    const Rational Km1 = n >= 1 ? K[n - 1] : Rational(0);
    const Rational rhs = -(2 * E + hbar * delta) * 2 * (n + 1) * K[n + 1] +
                         ((2 * n + 1) * m * w02 - m * delta * delta / (2 * n + 1)) * K[n] +
                         4 * lambda * n * Km1;
    K[n + 2] = rhs / ((hbar * hbar / m) * (n + 2) * (n + 1) * (2 * n + 3));
  }
  return K;
}

/// exp(-y) in MPFR for closed-form harmonic checks.
inline anharmonic::BigReal exp_neg(const anharmonic::BigReal& y) {
  anharmonic::Real r(ctx100().bits());
  mpfr_neg(r.get(), y.value().get(), MPFR_RNDN);
  mpfr_exp(r.get(), r.get(), MPFR_RNDN);
  return anharmonic::BigReal(ctx100(), r, 100);
}

/// Paper-preset level n solved once and cached across test cases.
const anharmonic::CertifiedLevel& paper_level(int n);

}  // namespace testing_support
