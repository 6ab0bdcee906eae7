#include "anharmonic/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace anharmonic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log10(10^a + 10^b) without overflow.
double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log10(1.0 + std::pow(10.0, lo - hi));
}

double cached_log10(const BigReal& v) { return v.is_zero() ? kNegInf : v.log10_abs(); }

double cached_sig(const BigReal& v) {
  return v.is_exact_zero() ? v.context().digits : v.raw_significance();
}

void cache(const std::vector<BigReal>& src, std::vector<double>& logs, std::vector<double>& sigs) {
  logs.clear();
  sigs.clear();
  logs.reserve(src.size());
  sigs.reserve(src.size());
  for (const BigReal& c : src) {
    logs.push_back(cached_log10(c));
    sigs.push_back(cached_sig(c));
  }
}

BigReal from_real(const PrecisionContext& ctx, Real v, double log10_noise) {
  if (v.is_zero()) return BigReal(ctx, std::move(v), 0.0);
  const double sig = v.log10_abs() - log10_noise;
  return BigReal(ctx, std::move(v), sig);
}

/// Log-domain weight of the derivative order d applied to the term
/// c_n x^(2n): log10 of (2n)(2n-1)...(2n-d+1) x^(-d). Returns -inf when the
/// term vanishes identically.
double derivative_weight(int n, int d, double log10_x) {
  double w = 0.0;
  for (int k = 0; k < d; ++k) {
    const int f = 2 * n - k;
    if (f <= 0) return kNegInf;
    w += std::log10(static_cast<double>(f));
  }
  return w - d * log10_x;
}

struct SumResult {
  Real value[3];
  double noise[3] = {kNegInf, kNegInf, kNegInf};
  TailEstimate tail;
};

/// Evaluates sum c_n x^(2n) and up to two x-derivatives with Horner in
/// y = x^2, together with log10 noise floors (tracked coefficient
/// uncertainty, working-precision rounding and the truncation estimate).
SumResult sum_series(const std::vector<BigReal>& coeffs, const std::vector<double>& logs,
                     const std::vector<double>& sigs, const std::vector<BigReal>& ahead,
                     const PrecisionContext& ctx, const BigReal& x, int derivs) {
  const mpfr_prec_t bits = ctx.bits();
  const int N = static_cast<int>(coeffs.size());
  SumResult r;
  for (Real& v : r.value) v = Real(bits);
  r.tail.order_used = N;

  if (x.is_zero()) {
    // Only c_0 contributes to K, nothing to K', and 2 c_1 to K''.
    mpfr_set(r.value[0].get(), coeffs[0].value().get(), MPFR_RNDN);
    r.noise[0] = logs[0] - sigs[0];
    if (derivs >= 1) r.noise[1] = kNegInf;
    if (derivs >= 2 && N > 1) {
      mpfr_mul_ui(r.value[2].get(), coeffs[1].value().get(), 2, MPFR_RNDN);
      r.noise[2] = std::log10(2.0) + logs[1] - sigs[1];
    }
    r.tail.log10_last_term_ratio = kNegInf;
    r.tail.trusted_digits = ctx.digits;
    return r;
  }

  Real y(bits);
  mpfr_sqr(y.get(), x.value().get(), MPFR_RNDN);
  Real b(bits), d1(bits), d2(bits);
  mpfr_set(b.get(), coeffs[N - 1].value().get(), MPFR_RNDN);
  for (int n = N - 2; n >= 0; --n) {
    if (derivs >= 2) mpfr_fma(d2.get(), d2.get(), y.get(), d1.get(), MPFR_RNDN);
    if (derivs >= 1) mpfr_fma(d1.get(), d1.get(), y.get(), b.get(), MPFR_RNDN);
    mpfr_fma(b.get(), b.get(), y.get(), coeffs[n].value().get(), MPFR_RNDN);
  }
  // K = P(y); K' = 2x P'(y); K'' = 2P'(y) + 4y P''(y), with P'' = 2 d2.
  mpfr_set(r.value[0].get(), b.get(), MPFR_RNDN);
  if (derivs >= 1) {
    mpfr_mul(r.value[1].get(), d1.get(), x.value().get(), MPFR_RNDN);
    mpfr_mul_ui(r.value[1].get(), r.value[1].get(), 2, MPFR_RNDN);
  }
  if (derivs >= 2) {
    Real t(bits);
    mpfr_mul(t.get(), d2.get(), y.get(), MPFR_RNDN);
    mpfr_mul_ui(t.get(), t.get(), 8, MPFR_RNDN);
    mpfr_mul_ui(r.value[2].get(), d1.get(), 2, MPFR_RNDN);
    mpfr_add(r.value[2].get(), r.value[2].get(), t.get(), MPFR_RNDN);
  }

  // Noise model, in log10.
  const double lx = x.log10_abs();
  const double ly = 2.0 * lx;
  double max_term[3] = {kNegInf, kNegInf, kNegInf};
  double rounding[3] = {kNegInf, kNegInf, kNegInf};
  for (int n = 0; n < N; ++n) {
    if (logs[n] == kNegInf) continue;
    const double a = logs[n] + n * ly;
    for (int d = 0; d <= derivs; ++d) {
      const double term = a + derivative_weight(n, d, lx);
      if (term == kNegInf) continue;
      max_term[d] = std::max(max_term[d], term);
      rounding[d] = std::max(rounding[d], term - sigs[n]);
    }
  }
  double omitted[3] = {kNegInf, kNegInf, kNegInf};
  double omitted_max[3] = {kNegInf, kNegInf, kNegInf};
  for (int k = 0; k < static_cast<int>(ahead.size()); ++k) {
    const int n = N + k;
    const double lc = cached_log10(ahead[k]);
    if (lc == kNegInf) continue;
    const double a = lc + n * ly;
    for (int d = 0; d <= derivs; ++d) {
      const double term = a + derivative_weight(n, d, lx);
      omitted[d] = log_add(omitted[d], term);
      omitted_max[d] = std::max(omitted_max[d], term);
      // Remainder beyond the look-ahead window, bounded by a few copies of
      // the last look-ahead terms (the sequence is factorially suppressed).
      if (k >= static_cast<int>(ahead.size()) - 2) {
        omitted[d] = log_add(omitted[d], term + std::log10(2.0));
      }
    }
  }
  const double horner = std::log10(static_cast<double>(N)) - ctx.internal_digits();
  for (int d = 0; d <= derivs; ++d) {
    double noise = rounding[d];
    noise = log_add(noise, max_term[d] + horner);
    noise = log_add(noise, omitted[d]);
    r.noise[d] = noise;
  }
  const double ratio = omitted_max[0] - max_term[0];
  r.tail.log10_last_term_ratio = ratio;
  if (ratio >= 0.0) {
    r.tail.trusted_digits = 0;
  } else {
    r.tail.trusted_digits =
        static_cast<int>(std::min<double>(std::floor(-ratio), ctx.digits));
  }
  return r;
}

int derivs_of(Derivs which) {
  switch (which) {
    case Derivs::K: return 0;
    case Derivs::KdK: return 1;
    case Derivs::All: break;
  }
  return 2;
}

}  // namespace

double TailEstimate::last_term_ratio() const { return std::pow(10.0, log10_last_term_ratio); }

bool tail_adequate(const TailEstimate& tail, int digits) {
  return tail.log10_last_term_ratio < -(digits + 5.0);
}

SeriesState build_series(const PotentialParams& params_in, const TrialEnergy& trial, int order,
                         const PrecisionContext& ctx, const std::optional<BigReal>& delta_in) {
  if (order < 3) throw std::invalid_argument("build_series: order must be >= 3");
  const PotentialParams params =
      params_in.context() == ctx ? params_in : params_in.at(ctx);
  const BigReal E = trial.E.context() == ctx
                        ? trial.E
                        : BigReal(ctx, trial.E.value(), trial.E.raw_significance());
  const BigReal delta = delta_in ? *delta_in : BigReal::zero(ctx);

  SeriesState s{params, TrialEnergy{E, trial.parity}, ctx, delta, order, {}, {}, {}, {},
                {}, {}, {}, {}};
  const int total = order + kLookahead;
  std::vector<BigReal> K;
  std::vector<BigReal> dK;
  K.reserve(total);
  dK.reserve(total);

  const BigReal& m = params.m;
  const BigReal& hbar = params.hbar;
  const BigReal m_over_h2 = m / (hbar * hbar);
  const BigReal m_w2 = m * params.omega0_sq;
  const BigReal m_d2 = m * delta * delta;
  // -(2E + hbar Delta); the E-derivative of this factor is -2.
  const BigReal drive = -(2 * E + hbar * delta);

  if (trial.parity == Parity::Even) {
    K.emplace_back(ctx, 1L);
    // K_1 = -(2m K_0 / hbar^2)(Delta hbar / 2 + E)
    K.push_back(-(2 * m_over_h2) * (hbar * delta / 2 + E));
    dK.push_back(BigReal::zero(ctx));
    dK.push_back(-(2 * m_over_h2));
  } else {
    K.push_back(BigReal::zero(ctx));
    K.emplace_back(ctx, 1L);
    dK.push_back(BigReal::zero(ctx));
    dK.push_back(BigReal::zero(ctx));
  }

  for (int n = 0; n + 2 < total; ++n) {
    // Integer parts of the row, formed exactly before a single division.
    const long denom = static_cast<long>(n + 2) * (n + 1) * (2L * n + 3);
    const long two_n1 = 2L * (n + 1);
    const long odd = 2L * n + 1;
    const long four_n = 4L * n;

    BigReal k_coef = odd * m_w2;
    if (!delta.is_exact_zero()) k_coef = k_coef - m_d2 / odd;

    BigReal rhs = drive * two_n1 * K[n + 1] + k_coef * K[n];
    BigReal drhs = -2 * two_n1 * K[n + 1] + drive * two_n1 * dK[n + 1] + k_coef * dK[n];
    if (n >= 1) {
      rhs = rhs + four_n * params.lambda * K[n - 1];
      drhs = drhs + four_n * params.lambda * dK[n - 1];
    }
    K.push_back(rhs * m_over_h2 / denom);
    dK.push_back(drhs * m_over_h2 / denom);
  }

  s.coeffs.assign(K.begin(), K.begin() + order);
  s.dcoeffs.assign(dK.begin(), dK.begin() + order);
  s.lookahead.assign(K.begin() + order, K.end());
  s.dlookahead.assign(dK.begin() + order, dK.end());
  cache(s.coeffs, s.log10_coeff, s.sig_coeff);
  cache(s.dcoeffs, s.log10_dcoeff, s.sig_dcoeff);
  return s;
}

std::vector<BigReal> l_coefficients(const SeriesState& s) {
  // L_n = -(m Delta/(2n+1)) K_n - hbar (n+1) K_{n+1}
  std::vector<BigReal> L;
  const int N = s.order;
  L.reserve(N - 1);
  for (int n = 0; n + 1 < N; ++n) {
    BigReal term = -(s.params.hbar * (n + 1L) * s.coeffs[n + 1]);
    if (!s.delta.is_exact_zero()) term = term - s.params.m * s.delta * s.coeffs[n] / (2L * n + 1);
    L.push_back(term);
  }
  return L;
}

bool PointEval::K_resolved() const { return K.log10_abs() > noise_K; }
bool PointEval::dK_resolved() const { return dK.log10_abs() > noise_dK; }
int PointEval::dK_sign() const { return dK_resolved() ? dK.sign() : 0; }

PointEval evaluate(const SeriesState& s, const BigReal& x, Derivs which) {
  SumResult r = sum_series(s.coeffs, s.log10_coeff, s.sig_coeff, s.lookahead, s.ctx, x,
                           derivs_of(which));
  PointEval p{x, std::move(r.value[0]), std::move(r.value[1]), std::move(r.value[2]),
              r.noise[0], r.noise[1], r.noise[2], r.tail};
  return p;
}

KValue eval_K(const SeriesState& s, const BigReal& x) {
  SumResult r = sum_series(s.coeffs, s.log10_coeff, s.sig_coeff, s.lookahead, s.ctx, x, 0);
  return KValue{from_real(s.ctx, std::move(r.value[0]), r.noise[0]), r.tail, r.noise[0]};
}

KValue eval_dKdE(const SeriesState& s, const BigReal& x) {
  SumResult r = sum_series(s.dcoeffs, s.log10_dcoeff, s.sig_dcoeff, s.dlookahead, s.ctx, x, 0);
  return KValue{from_real(s.ctx, std::move(r.value[0]), r.noise[0]), r.tail, r.noise[0]};
}

BigReal eval_density(const SeriesState& s, const BigReal& x) { return abs(eval_K(s, x).value); }

BigReal ratio_from(const SeriesState& s, const PointEval& p) {
  if (!p.K_resolved()) throw PoleError("ratio_from: |K| is within the noise floor");
  const Real& hbar = s.params.hbar.value();
  Real v = p.dK / p.K;
  v = v * hbar;
  mpfr_div_si(v.get(), v.get(), -2, MPFR_RNDN);
  const double rel_K = p.noise_K - p.K.log10_abs();
  const double rel_dK = p.dK.is_zero() ? 0.0 : p.noise_dK - p.dK.log10_abs();
  if (p.dK.is_zero()) {
    // Exact parity zero (x = 0): the ratio is exactly zero.
    if (p.noise_dK == kNegInf) return BigReal::zero(s.ctx);
    return BigReal(s.ctx, std::move(v), 0.0);
  }
  return BigReal(s.ctx, std::move(v), -std::max(rel_K, rel_dK));
}

BigReal eval_ratio(const SeriesState& s, const BigReal& x) {
  const PointEval p = evaluate(s, x, Derivs::KdK);
  if (!p.K_resolved()) {
    throw PoleError("eval_ratio: |K| is within the noise floor at x = " + x.to_scientific(12));
  }
  return ratio_from(s, p);
}

std::vector<BigReal> scan_grid(const PotentialParams& params, const BigReal& E,
                               const BigReal& a) {
  const double ad = a.to_double();
  const double Ed = E.to_double();
  const double m = params.m_d();
  const double hbar = params.hbar_d();
  const double coarse = ad / 1000.0;
  std::vector<BigReal> grid;
  grid.reserve(1100);
  double x = 0.0;
  while (true) {
    double h = coarse;
    const double excess = Ed - potential(params, x);
    if (excess > 0.0) {
      h = std::min(h, std::numbers::pi * hbar / (4.0 * std::sqrt(2.0 * m * excess)));
    }
    x += h;
    if (x >= ad - 1e-3 * coarse) break;
    grid.push_back(BigReal::from_double(E.context(), x));
  }
  grid.push_back(a);
  return grid;
}

namespace {

/// psi'^2 = K''/2 - (2m/hbar^2)(V - E) K, with its log10 noise.
std::pair<Real, double> psi_prime_sq(const SeriesState& s, const PointEval& p) {
  const PrecisionContext& ctx = s.ctx;
  const BigReal V = potential(s.params, p.x);
  const BigReal factor = 2 * s.params.m * (V - s.trial.E) / (s.params.hbar * s.params.hbar);
  Real q = p.d2K;
  mpfr_div_ui(q.get(), q.get(), 2, MPFR_RNDN);
  Real t = factor.value() * p.K;
  q = q - t;
  const double lf = factor.is_zero() ? kNegInf : factor.log10_abs();
  double noise = p.noise_d2K - std::log10(2.0);
  noise = log_add(noise, lf + p.noise_K);
  noise = log_add(noise, std::max(p.d2K.log10_abs(), lf + p.K.log10_abs()) -
                             ctx.internal_digits());
  return {std::move(q), noise};
}

}  // namespace

ZeroScan find_zeros(const SeriesState& s, const BigReal& a, const PrecisionContext& ctx) {
  ZeroScan out;
  const std::vector<BigReal> grid = scan_grid(s.params, s.trial.E, a);
  out.grid_points = static_cast<int>(grid.size());
  const PointEval at_a = evaluate(s, a, Derivs::K);
  out.untrusted = !tail_adequate(at_a.tail, ctx.digits);

  const double width_goal = a.log10_abs() - (ctx.digits - 5);
  int last_sign = 0;
  const BigReal* last_x = nullptr;
  for (const BigReal& x : grid) {
    const PointEval p = evaluate(s, x, Derivs::KdK);
    const int sg = p.dK_sign();
    if (sg == 0) continue;
    if (last_sign < 0 && sg > 0) {
      // A minimum of K = psi^2 lies in (last_x, x); bisect on the sign of K'.
      BigReal lo = *last_x;
      BigReal hi = x;
      while ((hi - lo).log10_abs() > width_goal) {
        BigReal mid = ((lo + hi) / 2).as_exact();
        const int ms = evaluate(s, mid, Derivs::KdK).dK_sign();
        if (ms == 0) {
          lo = mid;
          hi = mid;
          break;
        }
        (ms < 0 ? lo : hi) = mid;
      }
      const BigReal xm = ((lo + hi) / 2).as_exact();
      const PointEval pm = evaluate(s, xm, Derivs::All);
      const double floor_K = pm.noise_K + 3.0;
      if (pm.K.sign() < 0 && pm.K.log10_abs() > floor_K) {
        // K = psi^2 cannot be negative: the evaluation itself is unreliable.
        out.untrusted = true;
      } else if (pm.K.is_zero() || pm.K.log10_abs() <= floor_K) {
        const auto [q, q_noise] = psi_prime_sq(s, pm);
        if (q.sign() > 0 && q.log10_abs() > q_noise + 3.0) {
          out.zeros.push_back(xm);
        } else {
          out.near_miss = true;
          if (!out.near_miss_at) out.near_miss_at = xm;
        }
      }
    }
    last_sign = sg;
    last_x = &x;
  }
  return out;
}

// ---------------------------------------------------------------- diagnostics

bool Residual::within_floor() const {
  return value.is_zero() || value.log10_abs() <= log10_floor;
}

Residual conservation_residual(const SeriesState& s, const BigReal& x) {
  const PrecisionContext& ctx = s.ctx;
  const PointEval p = evaluate(s, x, Derivs::All);
  const Real& h = s.params.hbar.value();
  const Real h2 = h * h;
  const BigReal VmE = potential(s.params, x) - s.trial.E;

  // C = (hbar^2/2) K K'' - (hbar^2/4) K'^2 - 2m K^2 (V - E)
  Real t1 = h2 * p.K * p.d2K;
  mpfr_div_ui(t1.get(), t1.get(), 2, MPFR_RNDN);
  Real t2 = h2 * p.dK * p.dK;
  mpfr_div_ui(t2.get(), t2.get(), 4, MPFR_RNDN);
  Real t3 = s.params.m.value() * p.K * p.K * VmE.value();
  mpfr_mul_ui(t3.get(), t3.get(), 2, MPFR_RNDN);
  Real c = t1 - t2 - t3;

  const double lh2 = h2.log10_abs();
  const double lK = p.K.log10_abs(), ldK = p.dK.log10_abs(), ld2K = p.d2K.log10_abs();
  const double l2mV = std::log10(2.0) + s.params.m.log10_abs() + VmE.log10_abs();
  double floor = kNegInf;
  floor = log_add(floor, lh2 - std::log10(2.0) + lK + p.noise_d2K);
  floor = log_add(floor, lh2 - std::log10(2.0) + ld2K + p.noise_K);
  floor = log_add(floor, lh2 - std::log10(2.0) + ldK + p.noise_dK);
  floor = log_add(floor, std::log10(2.0) + l2mV + lK + p.noise_K);
  const double biggest = std::max({t1.log10_abs(), t2.log10_abs(), t3.log10_abs()});
  floor = log_add(floor, biggest - ctx.internal_digits() + 1.0);
  return Residual{from_real(ctx, std::move(c), floor), floor};
}

Residual riccati_residual(const SeriesState& s, const BigReal& x) {
  const PrecisionContext& ctx = s.ctx;
  const PointEval p = evaluate(s, x, Derivs::All);
  if (!p.K_resolved()) throw PoleError("riccati_residual: K within noise");
  const Real& h = s.params.hbar.value();
  const BigReal VmE = potential(s.params, x) - s.trial.E;

  // L/K = -(h/2) K'/K, (L/K)' = -(h/2)(K''K - K'^2)/K^2.
  Real g = p.dK / p.K;
  Real lk = h * g;
  mpfr_div_si(lk.get(), lk.get(), -2, MPFR_RNDN);
  Real dlk = (p.d2K * p.K - p.dK * p.dK) / (p.K * p.K);
  dlk = h * dlk;
  mpfr_div_si(dlk.get(), dlk.get(), -2, MPFR_RNDN);
  Real t1 = h * dlk;
  Real t2 = lk * lk;
  Real t3 = s.params.m.value() * VmE.value();
  mpfr_mul_ui(t3.get(), t3.get(), 2, MPFR_RNDN);
  Real r = t1 - t2 + t3;

  // Relative noise of K, K', K'' propagates into the O(1) terms.
  const double rel_K = p.noise_K - p.K.log10_abs();
  const double rel_dK = p.dK.is_zero() ? p.noise_dK : p.noise_dK - p.dK.log10_abs();
  const double rel_d2K = p.noise_d2K - p.d2K.log10_abs();
  const double rel = std::max({rel_K, rel_dK, rel_d2K}) + std::log10(4.0);
  const double biggest = std::max({t1.log10_abs(), t2.log10_abs(), t3.log10_abs()});
  double floor = biggest + rel;
  floor = log_add(floor, biggest - ctx.internal_digits() + 1.0);
  return Residual{from_real(ctx, std::move(r), floor), floor};
}

BigReal fit_residue(const SeriesState& s, const BigReal& x0, const BigReal& eps) {
  // Symmetric offsets make the least-squares intercept the plain mean.
  BigReal sum = BigReal::zero(s.ctx);
  for (long k : {-2L, -1L, 1L, 2L}) {
    const BigReal dx = eps * k;
    sum = sum + dx * eval_ratio(s, (x0 + dx).as_exact());
  }
  return sum / 4;
}

SuppressionStats suppression_stats(const SeriesState& s, int n_lo, int n_hi) {
  SuppressionStats st;
  const int hi = std::min(n_hi, s.order - 1);
  double best = kNegInf;
  double env = kNegInf;
  for (int n = std::max(n_lo, 0); n < hi; ++n) {
    const double a = s.log10_coeff[n];
    const double b = s.log10_coeff[n + 1];
    if (a != kNegInf && b != kNegInf) {
      const double r = b - a + (2.0 / 3.0) * std::log10(n + 1.0);
      if (r > best) {
        best = r;
        st.sup_index = n;
      }
    }
    if (n >= 1 && a != kNegInf) {
      const double e = (a + (2.0 / 3.0) * std::lgamma(n + 1.0) / std::numbers::ln10) / n;
      env = std::max(env, e);
    }
  }
  st.sup_ratio = best == kNegInf ? 0.0 : std::pow(10.0, best);
  st.envelope = env == kNegInf ? 0.0 : std::pow(10.0, env);
  return st;
}

void dump_coefficients(const SeriesState& s, std::ostream& out, int sig_digits) {
  for (int n = 0; n < s.order; ++n) {
    out << n << '\t' << s.coeffs[n].to_scientific(sig_digits) << '\t'
        << s.dcoeffs[n].to_scientific(sig_digits) << '\n';
  }
}

}  // namespace anharmonic
