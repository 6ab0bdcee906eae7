#include "anharmonic/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace anharmonic {

namespace {

constexpr double kLog10Of2 = 0.30102999566398119521;

mpfr_rnd_t to_mpfr(Rounding mode) {
  switch (mode) {
    case Rounding::Down: return MPFR_RNDD;
    case Rounding::Up: return MPFR_RNDU;
    case Rounding::Nearest: break;
  }
  return MPFR_RNDN;
}

mpfr_prec_t result_bits(const Real& a, const Real& b) {
  return std::max(a.precision(), b.precision());
}

PrecisionContext wider(const PrecisionContext& a, const PrecisionContext& b) {
  return a.internal_digits() >= b.internal_digits() ? a : b;
}

double clamp_significance(double s, const PrecisionContext& ctx) {
  if (!(s > 0.0)) return 0.0;
  return std::min(s, static_cast<double>(ctx.digits));
}

// Mantissa digits and decimal exponent such that v = 0.d1d2... x 10^exp.
std::pair<std::string, long> decimal_digits(const Real& v, int sig_digits, Rounding mode) {
  if (sig_digits < 1) throw std::invalid_argument("render: sig_digits must be >= 1");
  mpfr_exp_t exp = 0;
  char* raw = mpfr_get_str(nullptr, &exp, 10, static_cast<size_t>(sig_digits), v.get(),
                           to_mpfr(mode));
  if (raw == nullptr) throw std::runtime_error("render: mpfr_get_str failed");
  std::string digits(raw);
  mpfr_free_str(raw);
  return {digits, static_cast<long>(exp)};
}

}  // namespace

mpfr_prec_t PrecisionContext::bits() const {
  return static_cast<mpfr_prec_t>(std::ceil(internal_digits() / kLog10Of2)) + 8;
}

PrecisionContext with_precision(int digits, int guard_digits) {
  if (digits < 1) throw std::invalid_argument("with_precision: digits must be >= 1");
  if (guard_digits < 0) throw std::invalid_argument("with_precision: guard_digits must be >= 0");
  return PrecisionContext{digits, guard_digits};
}

// ---------------------------------------------------------------- Real

Real::Real() : Real(64) {}

Real::Real(mpfr_prec_t bits) {
  mpfr_init2(value_, bits);
  mpfr_set_zero(value_, 1);
}

Real::Real(mpfr_prec_t bits, long value) : Real(bits) { mpfr_set_si(value_, value, MPFR_RNDN); }

Real::Real(mpfr_prec_t bits, double value) : Real(bits) { mpfr_set_d(value_, value, MPFR_RNDN); }

Real::Real(mpfr_prec_t bits, std::string_view decimal) : Real(bits) {
  if (!is_decimal_literal(decimal)) {
    throw std::invalid_argument("not a decimal number: '" + std::string(decimal) + "'");
  }
  std::string text(decimal);
  if (mpfr_set_str(value_, text.c_str(), 10, MPFR_RNDN) != 0 && !mpfr_number_p(value_)) {
    throw std::invalid_argument("not a decimal number: '" + text + "'");
  }
}

Real::Real(const Real& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  if (this != &other) mpfr_swap(value_, other.value_);
  return *this;
}

Real::~Real() { mpfr_clear(value_); }

double Real::log10_abs() const {
  if (mpfr_zero_p(value_)) return -std::numeric_limits<double>::infinity();
  if (!mpfr_number_p(value_)) return std::numeric_limits<double>::infinity();
  long exp2 = 0;
  const double mant = mpfr_get_d_2exp(&exp2, value_, MPFR_RNDN);
  return std::log10(std::fabs(mant)) + static_cast<double>(exp2) * kLog10Of2;
}

Real operator+(const Real& a, const Real& b) {
  Real r(result_bits(a, b));
  mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a, const Real& b) {
  Real r(result_bits(a, b));
  mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator*(const Real& a, const Real& b) {
  Real r(result_bits(a, b));
  mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator/(const Real& a, const Real& b) {
  Real r(result_bits(a, b));
  mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDN);
  return r;
}

Real operator-(const Real& a) {
  Real r(a.precision());
  mpfr_neg(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real abs(const Real& a) {
  Real r(a.precision());
  mpfr_abs(r.get(), a.get(), MPFR_RNDN);
  return r;
}

Real sqrt(const Real& a) {
  Real r(a.precision());
  mpfr_sqrt(r.get(), a.get(), MPFR_RNDN);
  return r;
}

std::partial_ordering operator<=>(const Real& a, const Real& b) {
  if (mpfr_unordered_p(a.get(), b.get())) return std::partial_ordering::unordered;
  const int c = mpfr_cmp(a.get(), b.get());
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }

std::string to_scientific(const Real& v, int sig_digits, Rounding mode) {
  if (v.is_zero()) {
    std::string out = "0";
    if (sig_digits > 1) out += "." + std::string(static_cast<size_t>(sig_digits - 1), '0');
    return out + "E+00";
  }
  auto [digits, exp] = decimal_digits(v, sig_digits, mode);
  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  std::string out = sign + digits.substr(0, 1);
  if (digits.size() > 1) out += "." + digits.substr(1);
  const long e = exp - 1;
  std::string e_digits = std::to_string(e < 0 ? -e : e);
  if (e_digits.size() < 2) e_digits.insert(0, "0");
  out += (e < 0 ? "E-" : "E+") + e_digits;
  return out;
}

std::string to_positional(const Real& v, int sig_digits, Rounding mode) {
  if (v.is_zero()) {
    std::string out = "0";
    if (sig_digits > 1) out += "." + std::string(static_cast<size_t>(sig_digits - 1), '0');
    return out;
  }
  auto [digits, exp] = decimal_digits(v, sig_digits, mode);
  std::string sign;
  if (!digits.empty() && digits.front() == '-') {
    sign = "-";
    digits.erase(0, 1);
  }
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<size_t>(-exp), '0') + digits;
  } else if (static_cast<size_t>(exp) >= digits.size()) {
    out = digits + std::string(static_cast<size_t>(exp) - digits.size(), '0');
  } else {
    out = digits.substr(0, static_cast<size_t>(exp)) + "." + digits.substr(static_cast<size_t>(exp));
  }
  return sign + out;
}

bool is_decimal_literal(std::string_view text) {
  size_t i = 0;
  const size_t n = text.size();
  if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
  size_t mantissa_digits = 0;
  while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++mantissa_digits;
  if (i < n && text[i] == '.') {
    ++i;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++mantissa_digits;
  }
  if (mantissa_digits == 0) return false;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    if (i < n && (text[i] == '+' || text[i] == '-')) ++i;
    size_t exp_digits = 0;
    while (i < n && std::isdigit(static_cast<unsigned char>(text[i]))) ++i, ++exp_digits;
    if (exp_digits == 0) return false;
  }
  return i == n;
}

// ---------------------------------------------------------------- BigReal

BigReal::BigReal() : BigReal(PrecisionContext{}) {}

BigReal::BigReal(const PrecisionContext& ctx)
    : value_(ctx.bits()), significance_(ctx.digits), exact_zero_(true), ctx_(ctx) {}

BigReal::BigReal(const PrecisionContext& ctx, long value)
    : value_(ctx.bits(), value), significance_(ctx.digits), exact_zero_(value == 0), ctx_(ctx) {}

BigReal::BigReal(const PrecisionContext& ctx, std::string_view decimal)
    : value_(ctx.bits(), decimal), significance_(ctx.digits), ctx_(ctx) {
  exact_zero_ = value_.is_zero();
}

BigReal::BigReal(const PrecisionContext& ctx, Real value, double significance)
    : value_(std::move(value)), significance_(clamp_significance(significance, ctx)), ctx_(ctx) {
  if (value_.precision() != ctx.bits()) {
    Real rounded(ctx.bits());
    mpfr_set(rounded.get(), value_.get(), MPFR_RNDN);
    value_ = std::move(rounded);
  }
}

BigReal BigReal::from_double(const PrecisionContext& ctx, double v) {
  BigReal r(ctx, Real(ctx.bits(), v), ctx.digits);
  r.exact_zero_ = (v == 0.0);
  return r;
}

double BigReal::log10_uncertainty() const {
  if (exact_zero_) return -std::numeric_limits<double>::infinity();
  if (value_.is_zero()) {
    // A cancelled zero carries no magnitude; its uncertainty is unknown
    // beyond "at least as large as the value".
    return std::numeric_limits<double>::infinity();
  }
  return value_.log10_abs() - significance_;
}

BigReal BigReal::with_significance(double significance) const {
  BigReal r = *this;
  if (!exact_zero_) r.significance_ = clamp_significance(significance, ctx_);
  return r;
}

BigReal BigReal::as_exact() const {
  BigReal r = *this;
  r.significance_ = ctx_.digits;
  r.exact_zero_ = value_.is_zero();
  return r;
}

std::string BigReal::to_scientific(int sig_digits, Rounding mode) const {
  return anharmonic::to_scientific(value_, sig_digits, mode);
}

std::string BigReal::to_positional(int sig_digits, Rounding mode) const {
  return anharmonic::to_positional(value_, sig_digits, mode);
}

namespace {

BigReal additive(const BigReal& a, const BigReal& b, bool subtract) {
  if (b.is_exact_zero()) return a;
  if (a.is_exact_zero()) return subtract ? -b : b;
  const PrecisionContext ctx = wider(a.context(), b.context());
  Real v(ctx.bits());
  if (subtract) {
    mpfr_sub(v.get(), a.value().get(), b.value().get(), MPFR_RNDN);
  } else {
    mpfr_add(v.get(), a.value().get(), b.value().get(), MPFR_RNDN);
  }
  if (v.is_zero()) return BigReal(ctx, std::move(v), 0.0);
  const double err = std::max(a.log10_uncertainty(), b.log10_uncertainty());
  const double cap = std::max(a.raw_significance(), b.raw_significance());
  const double sig = std::min(v.log10_abs() - err, cap);
  return BigReal(ctx, std::move(v), sig);
}

}  // namespace

BigReal operator+(const BigReal& a, const BigReal& b) { return additive(a, b, false); }

BigReal operator-(const BigReal& a, const BigReal& b) { return additive(a, b, true); }

BigReal operator*(const BigReal& a, const BigReal& b) {
  if (a.exact_zero_) return a;
  if (b.exact_zero_) return b;
  const PrecisionContext ctx = wider(a.ctx_, b.ctx_);
  Real v(ctx.bits());
  mpfr_mul(v.get(), a.value_.get(), b.value_.get(), MPFR_RNDN);
  return BigReal(ctx, std::move(v), std::min(a.significance_, b.significance_));
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  if (b.is_zero()) throw std::domain_error("BigReal: division by zero");
  if (a.exact_zero_) return a;
  const PrecisionContext ctx = wider(a.ctx_, b.ctx_);
  Real v(ctx.bits());
  mpfr_div(v.get(), a.value_.get(), b.value_.get(), MPFR_RNDN);
  return BigReal(ctx, std::move(v), std::min(a.significance_, b.significance_));
}

BigReal operator-(const BigReal& a) {
  BigReal r = a;
  mpfr_neg(r.value_.get(), a.value_.get(), MPFR_RNDN);
  return r;
}

BigReal sqrt(const BigReal& a) {
  if (a.sign() < 0) throw std::domain_error("BigReal: sqrt of a negative number");
  if (a.exact_zero_) return a;
  BigReal r = a;
  mpfr_sqrt(r.value_.get(), a.value_.get(), MPFR_RNDN);
  return r;
}

BigReal abs(const BigReal& a) { return a.sign() < 0 ? -a : a; }

int significance_of(const BigReal& v) {
  if (v.is_exact_zero()) return v.context().digits;
  return static_cast<int>(std::floor(v.raw_significance() + 1e-9));
}

BigReal operator*(const BigReal& a, long k) { return a * BigReal(a.context(), k); }
BigReal operator*(long k, const BigReal& a) { return a * BigReal(a.context(), k); }
BigReal operator/(const BigReal& a, long k) { return a / BigReal(a.context(), k); }

BigReal min(const BigReal& a, const BigReal& b) { return b < a ? b : a; }
BigReal max(const BigReal& a, const BigReal& b) { return a < b ? b : a; }

}  // namespace anharmonic
