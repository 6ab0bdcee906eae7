#include "anharmonic/solver.hpp"

#include "anharmonic/oracle.hpp"
#include "anharmonic/series.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace anharmonic {

SolverConfig SolverConfig::paper() {
  SolverConfig cfg;
  cfg.order = 400;
  cfg.cutoff = "7.5";
  cfg.digits = 100;
  cfg.target_gap = "1e-32";
  return cfg;
}

void SolverConfig::validate() const {
  if (order < 3) throw std::invalid_argument("order must be >= 3");
  if (digits < 30) throw std::invalid_argument("digits must be >= 30");
  if (max_escalations < 0) throw std::invalid_argument("max_escalations must be >= 0");
  if (newton_max_steps < 0) throw std::invalid_argument("newton_max_steps must be >= 0");
  const PrecisionContext ctx = with_precision(digits);
  if (!is_decimal_literal(target_gap)) throw std::invalid_argument("gap is not a decimal number");
  const BigReal gap = BigReal::parse(ctx, target_gap);
  if (gap.sign() <= 0) throw std::invalid_argument("gap must be positive");
  if (gap.log10_abs() <= -(digits - 20)) {
    throw std::invalid_argument("gap must exceed 10^-(digits-20): leave 20 digits of headroom");
  }
  if (cutoff) {
    if (!is_decimal_literal(*cutoff)) throw std::invalid_argument("cutoff is not a decimal number");
    if (BigReal::parse(ctx, *cutoff).sign() <= 0) throw std::invalid_argument("cutoff must be > 0");
  }
}

namespace {

bool is_paper_parameters(const PotentialParams& p) {
  return p.m_d() == 0.5 && p.omega0_sq_d() == 4.0 && p.lambda_d() == 0.1 && p.hbar_d() == 1.0;
}

BigReal rewrap(const BigReal& v, const PrecisionContext& ctx) {
  return BigReal(ctx, v.value(), ctx.digits).as_exact();
}

/// Mutable per-level state: resources, bracket and bookkeeping. Owned by a
/// single task.
class LevelRun {
 public:
  LevelRun(const PotentialParams& params, int n, const SolverConfig& cfg, const TraceSink& trace)
      : params_(params), target_{n}, cfg_(cfg), trace_(trace) {
    order_ = cfg.order;
    digits_ = cfg.digits;
    ctx_ = with_precision(digits_);
    cutoff_ = BigReal::parse(ctx_, cfg.cutoff.value_or("7.5"));
    gap_target_ = BigReal::parse(ctx_, cfg.target_gap);
    level_.n = n;
    level_.newton_significance = std::numeric_limits<double>::quiet_NaN();
    level_.newton_iterate_significance = std::numeric_limits<double>::quiet_NaN();
  }

  const PrecisionContext& ctx() const { return ctx_; }

  Classification classify(const BigReal& E) {
    const PotentialParams p = params_.at(ctx_);
    Classification c = classify_energy(p, target_, rewrap(E, ctx_), cutoff_, order_, ctx_,
                                       ClassifyOptions{cfg_.allow_double_well});
    ++level_.provenance.classifications;
    const std::string line = trace_line(c, target_.n);
    level_.log.push_back(line);
    if (trace_) trace_(line);
    return c;
  }

  /// Raises the resource named by `why`. Returns false when exhausted.
  bool escalate(Limit why) {
    if (why == Limit::DoubleWell || why == Limit::None) return false;
    if (level_.provenance.escalations >= cfg_.max_escalations) return false;
    ++level_.provenance.escalations;
    std::ostringstream note;
    switch (why) {
      case Limit::Tail:
        order_ = (order_ * 3 + 1) / 2;
        note << "tail: N -> " << order_;
        break;
      case Limit::Cutoff:
        cutoff_ = (cutoff_ * BigReal(ctx_, "1.25")).as_exact();
        note << "cutoff: a -> " << cutoff_.to_positional(8);
        break;
      default: {
        digits_ *= 2;
        ctx_ = with_precision(digits_);
        cutoff_ = rewrap(cutoff_, ctx_);
        gap_target_ = BigReal::parse(ctx_, cfg_.target_gap);
        note << to_string(why) << ": digits -> " << digits_;
        break;
      }
    }
    level_.provenance.escalation_causes.push_back(note.str());
    const std::string line = "escalate level=" + std::to_string(target_.n) + " " + note.str();
    level_.log.push_back(line);
    if (trace_) trace_(line);
    return true;
  }

  /// Classifies E, escalating on Indeterminate verdicts until a verdict is
  /// reached or resources run out.
  Classification classify_resolved(const BigReal& E) {
    while (true) {
      Classification c = classify(E);
      if (c.verdict != Verdict::Indeterminate) return c;
      if (!escalate(c.limit)) return c;
    }
  }

  void fail(const std::string& why, Limit limit) {
    if (level_.failure.empty()) {
      level_.failure = why;
      level_.failure_limit = limit;
    }
  }

  bool set_bracket(BigReal lo, BigReal hi) {
    lo_ = std::move(lo);
    hi_ = std::move(hi);
    have_bracket_ = true;
    record_gap();
    return true;
  }

  void record_gap() {
    level_.gap_history.push_back((hi_ - lo_).log10_abs());
  }

  bool bracket(double seed) {
    const double width0 = 0.02 * std::max(std::fabs(seed), 1.0);
    BigReal lo = BigReal::from_double(ctx_, seed - width0);
    BigReal hi = BigReal::from_double(ctx_, seed + width0);
    BigReal width = BigReal::from_double(ctx_, width0);
    // Lower end: walk down until Below.
    for (int i = 0; i < 60; ++i) {
      Classification c = classify_resolved(lo);
      if (c.verdict == Verdict::Below) break;
      if (c.verdict == Verdict::Indeterminate) {
        fail("bracket: lower end indeterminate (" + c.detail + ")", c.limit);
        return false;
      }
      hi = lo;
      lo = (lo - width).as_exact();
      width = width * 2;
      if (i == 59) {
        fail("bracket: no Below energy found", Limit::None);
        return false;
      }
    }
    for (int i = 0; i < 60; ++i) {
      Classification c = classify_resolved(hi);
      if (c.verdict == Verdict::Above) break;
      if (c.verdict == Verdict::Indeterminate) {
        fail("bracket: upper end indeterminate (" + c.detail + ")", c.limit);
        return false;
      }
      lo = hi;
      hi = (hi + width).as_exact();
      width = width * 2;
      if (i == 59) {
        fail("bracket: no Above energy found", Limit::None);
        return false;
      }
    }
    lo = rewrap(lo, ctx_);
    hi = rewrap(hi, ctx_);
    return set_bracket(lo, hi);
  }

  /// Applies a verdict at E to the bracket. Returns false for Indeterminate.
  bool apply(const BigReal& E, const Classification& c) {
    if (c.verdict == Verdict::Below && E > lo_ && E < hi_) {
      lo_ = rewrap(E, ctx_);
    } else if (c.verdict == Verdict::Above && E > lo_ && E < hi_) {
      hi_ = rewrap(E, ctx_);
    } else {
      return c.verdict != Verdict::Indeterminate;
    }
    record_gap();
    return true;
  }

  /// Bisection until gap <= goal. Indeterminate probes are retried at
  /// off-centre points before resources are escalated.
  bool bisect_until(const BigReal& goal) {
    static const char* fractions[] = {"0.5", "0.25", "0.75"};
    while (gap() > goal) {
      bool progressed = false;
      Limit first_limit = Limit::None;
      std::string detail;
      for (const char* f : fractions) {
        const BigReal E = (lo_ + (hi_ - lo_) * BigReal(ctx_, f)).as_exact();
        const Classification c = classify(E);
        if (c.verdict != Verdict::Indeterminate) {
          apply(E, c);
          progressed = true;
          break;
        }
        if (first_limit == Limit::None) {
          first_limit = c.limit;
          detail = c.detail;
        }
      }
      if (!progressed && !escalate(first_limit)) {
        fail("bisection: escalation exhausted (" + detail + ")", first_limit);
        return false;
      }
    }
    return true;
  }

  /// Multiplicity-2 Newton on g(E) = K(a, E) from the upper end. Returns the
  /// converged root and a resolution estimate, or nothing if it left the
  /// bracket or stalled far from the root.
  std::optional<std::pair<BigReal, BigReal>> newton() {
    const PotentialParams p = params_.at(ctx_);
    BigReal E = hi_;
    std::optional<BigReal> prev_step;
    double curvature_log = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    for (int step = 0; step < cfg_.newton_max_steps; ++step) {
      const SeriesState s = build_series(p, TrialEnergy{E, target_.parity()}, order_, ctx_);
      const KValue K = eval_K(s, cutoff_);
      const KValue dK = eval_dKdE(s, cutoff_);
      ++level_.provenance.newton_steps;
      if (K.value.is_zero() || K.value.log10_abs() <= K.log10_noise) {
        converged = true;
        break;
      }
      if (dK.value.is_zero()) break;
      // K ~ c (E - E*)^2 near the double root: c = K_E^2 / (4K).
      curvature_log = 2 * dK.value.log10_abs() - std::log10(4.0) - K.value.log10_abs();
      const BigReal delta = 2 * K.value / dK.value;
      BigReal next = E - delta;
      if (!(next > lo_ && next < hi_)) {
        // Far from the root the step can overshoot; damp it to the midpoint
        // towards the violated bound and keep iterating.
        next = ((next > lo_ ? hi_ : lo_) + E) / 2;
        prev_step.reset();
        E = next.as_exact();
        continue;
      }
      level_.newton_iterate_significance = next.raw_significance();
      level_.newton_root = next;
      if (prev_step && step >= 3 && abs(delta) > abs(*prev_step) / 2) {
        // No longer contracting: the iterate sits at the noise floor.
        E = next.as_exact();
        converged = true;
        break;
      }
      prev_step = delta;
      E = next.as_exact();
    }
    if (!converged || std::isnan(curvature_log)) return std::nullopt;
    // Resolution of the double root: sqrt(noise / c).
    const SeriesState s = build_series(p, TrialEnergy{E, target_.parity()}, order_, ctx_);
    const double noise = eval_K(s, cutoff_).log10_noise;
    const double res_log = 0.5 * (noise - curvature_log);
    BigReal res = BigReal::parse(ctx_, "1e" + std::to_string(static_cast<int>(std::ceil(res_log))));
    level_.newton_root = E;
    level_.newton_significance = std::min<double>(E.log10_abs() - res_log, ctx_.digits);
    std::ostringstream line;
    line << "newton level=" << target_.n << " root=" << E.to_scientific(40)
         << " resolution=1e" << res_log << " significance=" << level_.newton_significance
         << " iterate_significance=" << level_.newton_iterate_significance;
    level_.log.push_back(line.str());
    if (trace_) trace_(line.str());
    return std::make_pair(E, res);
  }

  /// Upper bound from the Newton root: root + eps, eps growing x10 until Above.
  void tighten_upper(const BigReal& root, const BigReal& resolution) {
    BigReal floor_eps =
        abs(root) * BigReal::parse(ctx_, "1e-" + std::to_string(std::max(ctx_.digits - 10, 1)));
    BigReal eps = max(resolution * 4, floor_eps).as_exact();
    const BigReal ten(ctx_, 10L);
    while (true) {
      const BigReal E = (root + eps).as_exact();
      if (!(E < hi_)) return;
      const Classification c = classify(E);
      if (c.verdict == Verdict::Above) {
        apply(E, c);
        return;
      }
      if (c.verdict == Verdict::Below) {
        apply(E, c);  // the root estimate was low; the bracket still shrinks
      }
      eps = (eps * ten).as_exact();
    }
  }

  /// Lower bound: probe at E_hi - gap/2. An Above verdict there moves E_hi
  /// down and the probe is repeated. Indeterminate probes (the energy is
  /// within the noise-limited zone around E_n) are pushed further down
  /// geometrically, so the closing bisection starts from a nearby E_lo.
  void tighten_lower() {
    for (int attempt = 0; attempt < 16; ++attempt) {
      bool moved = false;
      BigReal distance = gap_target_ / 2;
      for (int k = 0; k < 48; ++k) {
        const BigReal E = (hi_ - distance).as_exact();
        if (!(E > lo_)) return;
        const Classification c = classify(E);
        if (c.verdict == Verdict::Below) {
          apply(E, c);
          return;
        }
        if (c.verdict == Verdict::Above) {
          apply(E, c);
          moved = true;
          break;
        }
        distance = distance * 4;
      }
      if (!moved) return;
    }
  }

  void verify() {
    const Classification below = classify(lo_);
    const Classification above = classify(hi_);
    if (below.verdict != Verdict::Below) {
      fail("re-verification: E_lo is " + std::string(to_string(below.verdict)), below.limit);
    }
    if (above.verdict != Verdict::Above) {
      fail("re-verification: E_hi is " + std::string(to_string(above.verdict)), above.limit);
    }
  }

  CertifiedLevel finish() {
    if (have_bracket_) {
      level_.E_lo = lo_;
      level_.E_hi = hi_;
      level_.gap = (hi_ - lo_).as_exact();
      const double lg = level_.gap.log10_abs();
      level_.digits_reported =
          std::clamp(static_cast<int>(std::floor(-lg)) - 1, 0, ctx_.digits);
    }
    level_.provenance.order = order_;
    level_.provenance.cutoff = cutoff_.to_positional(12);
    // Trim trailing zeros of the rendered cutoff.
    std::string& a = level_.provenance.cutoff;
    if (a.find('.') != std::string::npos) {
      while (a.back() == '0') a.pop_back();
      if (a.back() == '.') a.pop_back();
    }
    level_.provenance.digits = digits_;
    level_.certified = level_.failure.empty() && have_bracket_ && gap() <= gap_target_;
    if (!level_.certified && level_.failure.empty()) fail("gap above target", Limit::None);
    return level_;
  }

  BigReal gap() const { return hi_ - lo_; }
  const BigReal& gap_target() const { return gap_target_; }
  const BigReal& hi() const { return hi_; }
  CertifiedLevel& level() { return level_; }
  void set_cutoff(const BigReal& a) { cutoff_ = rewrap(a, ctx_); }
  void set_bounds_for_refine(const Bracket& b) {
    set_bracket(rewrap(b.lo, ctx_), rewrap(b.hi, ctx_));
  }

 private:
  PotentialParams params_;
  LevelTarget target_;
  SolverConfig cfg_;
  TraceSink trace_;
  int order_;
  int digits_;
  PrecisionContext ctx_;
  BigReal cutoff_;
  BigReal gap_target_;
  BigReal lo_, hi_;
  bool have_bracket_ = false;
  CertifiedLevel level_;
};

SolverConfig with_cutoff(const PotentialParams& params, int n, SolverConfig cfg) {
  if (!cfg.cutoff) cfg.cutoff = resolve_cutoff(params, n, cfg);
  return cfg;
}

void refine(LevelRun& run) {
  const PrecisionContext& ctx = run.ctx();
  // Coarse bisection until Newton from the upper end is safe.
  const BigReal coarse = abs(run.hi()) * BigReal(ctx, "1e-3");
  if (!run.bisect_until(max(coarse, run.gap_target()))) return;
  if (run.gap() > run.gap_target()) {
    if (auto root = run.newton()) {
      run.tighten_upper(root->first, root->second);
      run.tighten_lower();
    }
  }
  if (!run.bisect_until(run.gap_target())) return;
  run.verify();
}

}  // namespace

double seed_energy(const PotentialParams& params, int n, bool use_oracle, std::string* source) {
  if (use_oracle) {
    std::optional<double> ref;
    if (!(params.omega0_sq_d() > 0.0)) ref = 1.0;
    const OracleSpectrum o = rayleigh_ritz(params, std::max(200, 4 * (n + 10)), ref);
    if (n < static_cast<int>(o.energies.size())) {
      if (source) *source = "oracle";
      return o.energies[n];
    }
  }
  if (source) *source = "semiclassical";
  return semiclassical_energy(params, n);
}

std::string resolve_cutoff(const PotentialParams& params, int n_max, const SolverConfig& cfg) {
  if (cfg.cutoff) return *cfg.cutoff;
  // The paper validates a = 7.5 for its parameters up to E_9 ~ 26.5.
  if (is_paper_parameters(params) && n_max <= 9) return "7.5";
  const double E = seed_energy(params, n_max, cfg.seed_from_oracle && params.omega0_sq_d() > 0,
                               nullptr);
  double a = 2.5 * turning_point(params, E);
  if (is_paper_parameters(params)) a = std::max(a, 7.5);
  // Round up to a short decimal so provenance stays readable.
  const double step = 0.25;
  a = std::ceil(a / step) * step;
  std::ostringstream out;
  out << a;
  return out.str();
}

Bracket bracket_level(const PotentialParams& params, int n, const SolverConfig& cfg_in) {
  const SolverConfig cfg = with_cutoff(params, n, cfg_in);
  LevelRun run(params, n, cfg, {});
  const double seed = seed_energy(params, n, cfg.seed_from_oracle, nullptr);
  if (!run.bracket(seed)) throw std::runtime_error(run.level().failure);
  const CertifiedLevel l = run.finish();
  return Bracket{l.E_lo, l.E_hi};
}

CertifiedLevel refine_level(const PotentialParams& params, int n, const Bracket& bracket,
                            const SolverConfig& cfg_in, const TraceSink& trace) {
  const SolverConfig cfg = with_cutoff(params, n, cfg_in);
  LevelRun run(params, n, cfg, trace);
  run.set_bounds_for_refine(bracket);
  refine(run);
  return run.finish();
}

CertifiedLevel solve_level(const PotentialParams& params, int n, const SolverConfig& cfg_in,
                           const TraceSink& trace) {
  SolverConfig cfg = cfg_in;
  try {
    cfg.validate();
    cfg = with_cutoff(params, n, cfg);
    LevelRun run(params, n, cfg, trace);
    std::string source;
    const double seed = seed_energy(params, n, cfg.seed_from_oracle, &source);
    run.level().provenance.seed = source;
    if (run.bracket(seed)) refine(run);
    return run.finish();
  } catch (const std::exception& e) {
    CertifiedLevel failed;
    failed.n = n;
    failed.failure = e.what();
    failed.newton_significance = std::numeric_limits<double>::quiet_NaN();
    failed.newton_iterate_significance = failed.newton_significance;
    return failed;
  }
}

std::vector<CertifiedLevel> solve_spectrum(const PotentialParams& params, int n_lo, int n_hi,
                                           const SolverConfig& cfg_in, const TraceSink& trace) {
  if (n_lo < 0 || n_hi < n_lo) throw std::invalid_argument("solve_spectrum: bad level range");
  SolverConfig cfg = cfg_in;
  cfg.validate();
  // One cutoff for the whole run, sized for the highest level.
  if (!cfg.cutoff) cfg.cutoff = resolve_cutoff(params, n_hi, cfg);
  // Levels run concurrently; serialise trace output.
  auto mutex = std::make_shared<std::mutex>();
  TraceSink guarded;
  if (trace) {
    guarded = [mutex, trace](const std::string& line) {
      std::lock_guard<std::mutex> lock(*mutex);
      trace(line);
    };
  }
  std::vector<std::future<CertifiedLevel>> jobs;
  for (int n = n_lo; n <= n_hi; ++n) {
    jobs.push_back(std::async(std::launch::async,
                              [&params, n, cfg, guarded] { return solve_level(params, n, cfg, guarded); }));
  }
  std::vector<CertifiedLevel> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace anharmonic
