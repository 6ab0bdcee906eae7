#pragma once

#include <mpfr.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace anharmonic {

/// Working precision for all high-precision arithmetic. `digits` are the
/// decimal digits the caller cares about; `guard_digits` are carried on top
/// so that rounding in long sums stays below the tracked significance.
struct PrecisionContext {
  int digits = 30;
  int guard_digits = 10;

  int internal_digits() const { return digits + guard_digits; }
  mpfr_prec_t bits() const;

  bool operator==(const PrecisionContext&) const = default;
};

/// Builds a context with the default guard digits. Throws on digits < 1.
PrecisionContext with_precision(int digits, int guard_digits = 10);

/// Owning RAII wrapper over an `mpfr_t`. Plain value semantics, no
/// significance bookkeeping; the hot loops in `series` work on this type.
class Real {
 public:
  Real();
  explicit Real(mpfr_prec_t bits);
  Real(mpfr_prec_t bits, long value);
  Real(mpfr_prec_t bits, double value);
  Real(mpfr_prec_t bits, std::string_view decimal);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }
  double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
  /// log10 |x|, computed without overflow for any exponent; -inf for zero.
  double log10_abs() const;

 private:
  mpfr_t value_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator-(const Real& a);
Real abs(const Real& a);
Real sqrt(const Real& a);
std::partial_ordering operator<=>(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);

enum class Rounding { Nearest, Down, Up };

/// Scientific rendering `d.ddd...dE+nn` with exactly `sig_digits` digits.
std::string to_scientific(const Real& v, int sig_digits, Rounding mode = Rounding::Nearest);
/// Positional rendering with exactly `sig_digits` significant digits.
std::string to_positional(const Real& v, int sig_digits, Rounding mode = Rounding::Nearest);

/// Arbitrary-precision real carrying an estimate of how many of its leading
/// decimal digits are trustworthy.
///
/// Significance rules:
///  - exact inputs (parsed decimals, integers) start at `ctx.digits`;
///  - `*`, `/` and `sqrt` report the minimum significance of their inputs;
///  - `+`/`-` propagate the larger absolute uncertainty, so a subtraction of
///    equally significant operands is debited log10(max(|a|,|b|)/|a-b|);
///  - a result of exactly zero from cancellation has significance 0;
///  - the exact-zero state (BigReal::zero) is an identity for `+` and an
///    annihilator for `*` and never lowers significance.
/// Significance is kept fractional internally and reported floored.
class BigReal {
 public:
  BigReal();
  explicit BigReal(const PrecisionContext& ctx);  // exact zero
  BigReal(const PrecisionContext& ctx, long value);
  BigReal(const PrecisionContext& ctx, std::string_view decimal);
  BigReal(const PrecisionContext& ctx, Real value, double significance);

  static BigReal zero(const PrecisionContext& ctx) { return BigReal(ctx); }
  static BigReal parse(const PrecisionContext& ctx, std::string_view decimal) {
    return BigReal(ctx, decimal);
  }
  /// Treats a double as exact (used for grid abscissae and test inputs).
  static BigReal from_double(const PrecisionContext& ctx, double v);

  const Real& value() const { return value_; }
  const PrecisionContext& context() const { return ctx_; }
  double raw_significance() const { return significance_; }
  bool is_exact_zero() const { return exact_zero_; }
  bool is_zero() const { return value_.is_zero(); }
  int sign() const { return value_.sign(); }
  double to_double() const { return value_.to_double(); }
  double log10_abs() const { return value_.log10_abs(); }

  /// Absolute uncertainty as log10, i.e. log10|v| - significance.
  double log10_uncertainty() const;

  /// Same value with significance replaced (clamped to the context).
  BigReal with_significance(double significance) const;
  /// Same value, re-anchored as an exact input of `ctx`.
  BigReal as_exact() const;

  std::string to_scientific(int sig_digits, Rounding mode = Rounding::Nearest) const;
  std::string to_positional(int sig_digits, Rounding mode = Rounding::Nearest) const;

  friend BigReal operator+(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a, const BigReal& b);
  friend BigReal operator*(const BigReal& a, const BigReal& b);
  friend BigReal operator/(const BigReal& a, const BigReal& b);
  friend BigReal operator-(const BigReal& a);
  friend BigReal sqrt(const BigReal& a);
  friend BigReal abs(const BigReal& a);

  BigReal& operator+=(const BigReal& b) { return *this = *this + b; }
  BigReal& operator-=(const BigReal& b) { return *this = *this - b; }
  BigReal& operator*=(const BigReal& b) { return *this = *this * b; }
  BigReal& operator/=(const BigReal& b) { return *this = *this / b; }

  friend std::partial_ordering operator<=>(const BigReal& a, const BigReal& b) {
    return a.value_ <=> b.value_;
  }
  friend bool operator==(const BigReal& a, const BigReal& b) { return a.value_ == b.value_; }

 private:
  Real value_;
  double significance_ = 0.0;
  bool exact_zero_ = false;
  PrecisionContext ctx_;
};

/// Reported significance: floor of the tracked digit count. Exact zero
/// reports the context's digits.
int significance_of(const BigReal& v);

BigReal operator*(const BigReal& a, long k);
BigReal operator*(long k, const BigReal& a);
BigReal operator/(const BigReal& a, long k);

BigReal min(const BigReal& a, const BigReal& b);
BigReal max(const BigReal& a, const BigReal& b);

/// True for `[+-]digits[.digits][(e|E)[+-]digits]` (also `.5`, `5.`).
bool is_decimal_literal(std::string_view text);

}  // namespace anharmonic
