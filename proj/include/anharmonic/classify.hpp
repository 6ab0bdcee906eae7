#pragma once

#include "anharmonic/model.hpp"
#include "anharmonic/numerics.hpp"
#include "anharmonic/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace anharmonic {

struct LevelTarget {
  int n = 0;

  Parity parity() const { return n % 2 == 0 ? Parity::Even : Parity::Odd; }
  /// The n-th eigenfunction has n nodes; floor(n/2) of them lie in x > 0.
  int positive_nodes() const { return n / 2; }
};

enum class Verdict { Below, Above, Indeterminate };

/// Resource that limited an Indeterminate verdict.
enum class Limit { None, Tail, Cutoff, Scan, Precision, DoubleWell };

std::string_view to_string(Verdict v);
std::string_view to_string(Limit l);

struct SinkEvidence {
  BigReal x;      // x*
  BigReal ratio;  // (L/K)(x*)
  BigReal wkb;    // sqrt(2m(V(x*) - E))
};

struct Resources {
  int order = 400;
  BigReal cutoff;
  int digits = 100;
};

struct Classification {
  Verdict verdict = Verdict::Indeterminate;
  int node_count = 0;
  std::vector<BigReal> zeros;
  std::optional<BigReal> entering_zero;  // Above: the outermost zero
  std::optional<SinkEvidence> sink;      // Below
  Limit limit = Limit::None;
  std::string detail;
  BigReal E;
  Resources resources;
  double log10_tail_ratio = 0;
};

struct ClassifyOptions {
  bool allow_double_well = false;
};

/// Below / Above / Indeterminate for trial energy E against level `target`.
Classification classify_energy(const PotentialParams& params, const LevelTarget& target,
                               const BigReal& E, const BigReal& a, int order,
                               const PrecisionContext& ctx, const ClassifyOptions& opts = {});

/// First grid point x* in [x_start, a] where -W < L/K < W, with
/// W = sqrt(2m(V - E)), both margins exceeding the noise of L/K. There the
/// Riccati slope (L/K)^2 - W^2 is negative and the trajectory is trapped.
std::optional<SinkEvidence> sink_entry(const PotentialParams& params, const SeriesState& s,
                                       const BigReal& x_start, const BigReal& a);

/// One trace record: E, verdict, node_count, x* or entering zero, resources.
std::string trace_line(const Classification& c, int level);

}  // namespace anharmonic
