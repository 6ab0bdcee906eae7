#include "anharmonic/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace anharmonic {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Below: return "Below";
    case Verdict::Above: return "Above";
    case Verdict::Indeterminate: break;
  }
  return "Indeterminate";
}

std::string_view to_string(Limit l) {
  switch (l) {
    case Limit::None: return "none";
    case Limit::Tail: return "tail";
    case Limit::Cutoff: return "cutoff";
    case Limit::Scan: return "scan";
    case Limit::Precision: return "precision";
    case Limit::DoubleWell: return "double_well";
  }
  return "none";
}

std::optional<SinkEvidence> sink_entry(const PotentialParams& /*params*/, const SeriesState& s,
                                       const BigReal& x_start, const BigReal& a) {
  // The series carries the parameters at its own precision.
  const PotentialParams& params = s.params;
  std::vector<BigReal> points{x_start};
  for (BigReal& x : scan_grid(params, s.trial.E, a)) {
    if (x > x_start) points.push_back(std::move(x));
  }
  const BigReal two_m = 2 * params.m;
  for (const BigReal& x : points) {
    const BigReal excess = potential(params, x) - s.trial.E;
    if (excess.sign() <= 0) continue;
    const PointEval p = evaluate(s, x, Derivs::KdK);
    if (!p.K_resolved()) continue;
    const BigReal lk = ratio_from(s, p);
    const BigReal w = sqrt(two_m * excess);
    // Both margins must exceed the combined uncertainty by three digits.
    const double noise = std::max(lk.log10_uncertainty(), w.log10_uncertainty()) + 3.0;
    const BigReal upper = w - lk;
    const BigReal lower = w + lk;
    const bool inside_upper = upper.sign() > 0 && upper.log10_abs() > noise;
    const bool inside_lower = lower.sign() > 0 && lower.log10_abs() > noise;
    if (inside_upper && inside_lower) {
      return SinkEvidence{x, lk, w};
    }
  }
  return std::nullopt;
}

Classification classify_energy(const PotentialParams& params_in, const LevelTarget& target,
                               const BigReal& E_in, const BigReal& a_in, int order,
                               const PrecisionContext& ctx, const ClassifyOptions& opts) {
  const PotentialParams params = params_in.context() == ctx ? params_in : params_in.at(ctx);
  const BigReal E = BigReal(ctx, E_in.value(), ctx.digits).as_exact();
  const BigReal a = BigReal(ctx, a_in.value(), ctx.digits).as_exact();

  Classification c;
  c.E = E;
  c.resources = Resources{order, a, ctx.digits};

  if (params.is_double_well() && !opts.allow_double_well) {
    c.limit = Limit::DoubleWell;
    c.detail = "omega0_sq < 0 requires --experimental-double-well";
    return c;
  }
  if (potential(params, a) <= E) {
    c.limit = Limit::Cutoff;
    c.detail = "cutoff inside the classically allowed region";
    return c;
  }

  const SeriesState s = build_series(params, TrialEnergy{E, target.parity()}, order, ctx);
  const PointEval at_a = evaluate(s, a, Derivs::K);
  c.log10_tail_ratio = at_a.tail.log10_last_term_ratio;
  if (!tail_adequate(at_a.tail, ctx.digits)) {
    c.limit = Limit::Tail;
    std::ostringstream msg;
    msg << "last-term ratio 1e" << static_cast<int>(std::ceil(at_a.tail.log10_last_term_ratio))
        << " at the cutoff";
    c.detail = msg.str();
    return c;
  }

  const ZeroScan scan = find_zeros(s, a, ctx);
  c.zeros = scan.zeros;
  c.node_count = static_cast<int>(scan.zeros.size());
  if (scan.untrusted) {
    c.limit = Limit::Precision;
    c.detail = "negative K beyond noise: evaluation untrusted";
    return c;
  }
  if (c.node_count > target.positive_nodes()) {
    // Extra nodes are certified individually, so a near miss elsewhere
    // cannot undo the verdict.
    c.verdict = Verdict::Above;
    c.entering_zero = scan.zeros.back();
    return c;
  }
  if (scan.near_miss) {
    c.limit = Limit::Scan;
    c.detail = "minimum of K at noise level without a certified node at x=" +
               scan.near_miss_at->to_scientific(12);
    return c;
  }

  BigReal x_start = turning_point(params, E);
  if (!scan.zeros.empty() && scan.zeros.back() > x_start) x_start = scan.zeros.back();
  if (x_start >= a) {
    c.limit = Limit::Cutoff;
    c.detail = "no room for a sink entry before the cutoff";
    return c;
  }
  auto sink = sink_entry(params, s, x_start, a);
  if (!sink) {
    c.limit = Limit::Cutoff;
    c.detail = "L/K still above the WKB curve at the cutoff";
    return c;
  }
  c.verdict = Verdict::Below;
  c.sink = std::move(sink);
  return c;
}

std::string trace_line(const Classification& c, int level) {
  std::ostringstream out;
  out << "classify level=" << level << " E=" << c.E.to_scientific(c.resources.digits)
      << " verdict=" << to_string(c.verdict) << " node_count=" << c.node_count;
  if (c.sink) {
    out << " x*=" << c.sink->x.to_scientific(12);
  } else if (c.entering_zero) {
    out << " zero=" << c.entering_zero->to_scientific(12);
  } else {
    out << " reason=" << to_string(c.limit);
  }
  out << " N=" << c.resources.order << " a=" << c.resources.cutoff.to_scientific(6)
      << " digits=" << c.resources.digits;
  return out.str();
}

}  // namespace anharmonic
