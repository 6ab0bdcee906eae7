// Acceptance criteria 1-10 of the specification. Tolerances are pinned
// below; each criterion prints exactly one PASS/FAIL line followed by
// indented diagnostics. Exit status is 0 only when every criterion passes.

#include "anharmonic/classify.hpp"
#include "anharmonic/model.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/report.hpp"
#include "anharmonic/series.hpp"
#include "anharmonic/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

using namespace anharmonic;

namespace tolerance {
constexpr const char* kGap = "1e-32";              // criterion 2
constexpr double kHarmonicCoeffRel = -95;          // criterion 3: log10 relative error
constexpr double kConservationDiag = -60;          // criterion 4: diagnostic threshold
constexpr double kRiccati = -50;                   // criterion 5
constexpr double kZeroClearance = 0.1;             // criterion 5
constexpr double kResidueRel = -6;                 // criterion 6: log10 |r + hbar| / hbar
constexpr double kResidueEpsRel = 1e-6;            // criterion 6: eps = 1e-6 x0
constexpr double kOracle = 1e-8;                   // criterion 7
constexpr double kSuppressionSpread = 10;          // criterion 8
constexpr double kSignificanceDrop = 15;           // criterion 9
constexpr int kSweepPoints = 50;                   // criterion 10
constexpr unsigned kSeed = 20240131;               // criteria 4 and 5
}  // namespace tolerance

namespace {

int failures = 0;

void verdict(int k, bool ok, const std::string& what) {
  std::cout << "CRITERION " << std::setw(2) << k << (ok ? " PASS " : " FAIL ") << what << "\n";
  if (!ok) ++failures;
}

void diag(const std::string& line) { std::cout << "    " << line << "\n"; }

std::string fmt(double v, int places = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(places) << v;
  return out.str();
}

bool inside_rounding_cell(const CertifiedLevel& l, const std::string& table_value) {
  const PrecisionContext& ctx = l.E_lo.context();
  const BigReal v(ctx, table_value);
  const int int_digits = static_cast<int>(table_value.find('.'));
  const BigReal half_ulp(ctx, "5e" + std::to_string(int_digits - 31));
  return v - half_ulp <= l.E_lo && l.E_hi <= v + half_ulp;
}

SeriesState eigen_series(const PotentialParams& params, const CertifiedLevel& l, int order) {
  const PrecisionContext ctx = with_precision(l.provenance.digits);
  return build_series(params.at(ctx), {l.midpoint(), LevelTarget{l.n}.parity()}, order, ctx);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const PrecisionContext ctx = with_precision(100);
  const PotentialParams paper = PotentialParams::paper(ctx);
  const SolverConfig paper_cfg = SolverConfig::paper();
  std::cout << "acceptance: paper preset m=1/2 w0^2=4 lambda=1/10 hbar=1, N=" << paper_cfg.order
            << " a=" << *paper_cfg.cutoff << " digits=" << paper_cfg.digits
            << " gap=" << paper_cfg.target_gap << "\n";

  // ---------------------------------------------------------------- 1 and 2
  const std::vector<CertifiedLevel> levels = solve_spectrum(paper, 0, 9, paper_cfg);
  {
    bool ok = levels.size() == 10;
    for (const CertifiedLevel& l : levels) {
      const std::string& table = table1_values()[l.n];
      const bool certified = l.certified;
      const bool cell = certified && inside_rounding_cell(l, table);
      const std::string mid = certified ? render_midpoint(l, 30) : "uncertified: " + l.failure;
      const bool match = certified && mid == table;
      ok = ok && cell && match;
      diag("n=" + std::to_string(l.n) + " " + mid + (match ? " == " : " != ") + table +
           (cell ? "" : " (interval outside the Table-1 rounding cell)") + " N=" +
           std::to_string(l.provenance.order) + " classifications=" +
           std::to_string(l.provenance.classifications));
    }
    verdict(1, ok, "Table-1 reproduction: 30-digit midpoints match digit for digit");
  }
  {
    bool ok = true;
    const BigReal target(ctx, tolerance::kGap);
    for (const CertifiedLevel& l : levels) {
      const bool g = l.certified && l.gap <= target;
      ok = ok && g;
      diag("n=" + std::to_string(l.n) + " gap=" + (l.certified ? l.gap.to_scientific(3, Rounding::Up) : "-"));
    }
    verdict(2, ok, std::string("every certified gap <= ") + tolerance::kGap);
  }

  // ---------------------------------------------------------------- 3
  {
    const PotentialParams harmonic = PotentialParams::from_strings(ctx, "0.5", "4", "0", "1");
    const std::vector<CertifiedLevel> h = solve_spectrum(harmonic, 0, 9, SolverConfig{});
    bool ok = h.size() == 10;
    for (const CertifiedLevel& l : h) {
      const BigReal exact(l.E_lo.context(), 2L * l.n + 1);
      const bool in = l.certified && l.E_lo < exact && exact < l.E_hi;
      ok = ok && in;
      diag("n=" + std::to_string(l.n) + (in ? " contains " : " MISSES ") + std::to_string(2 * l.n + 1) +
           (l.certified ? " gap=" + l.gap.to_scientific(2, Rounding::Up) + " a=" + l.provenance.cutoff +
                              " N=" + std::to_string(l.provenance.order) +
                              " digits=" + std::to_string(l.provenance.digits)
                        : " failure: " + l.failure));
    }
    const SeriesState g = build_series(harmonic, {BigReal(ctx, 1), Parity::Even}, 400, ctx);
    BigReal expect(ctx, 1);
    double worst = -1e9;
    for (int n = 0; n < 400; ++n) {
      const BigReal d = g.coeffs[n] - expect;
      if (!d.is_zero()) worst = std::max(worst, d.log10_abs() - expect.log10_abs());
      expect = -expect / BigReal(ctx, n + 1);
    }
    const bool coeff_ok = worst < tolerance::kHarmonicCoeffRel;
    diag("ground-state K_n = (-1)^n/n!, n<400: worst log10 relative error " + fmt(worst));
    verdict(3, ok && coeff_ok, "harmonic limit: intervals contain 2n+1, coefficients exact");
  }

  // ---------------------------------------------------------------- 4 and 5
  {
    std::mt19937 rng(tolerance::kSeed);
    std::uniform_real_distribution<double> uE(0.5, 27.0), ux(0.0, 7.5);
    int total = 0, within = 0, below60 = 0;
    int r_total = 0, r_ok = 0;
    double r_worst = -1e9;
    for (int pair = 0; pair < 20; ++pair) {
      const BigReal E = BigReal::from_double(ctx, uE(rng));
      const Parity parity = pair % 2 ? Parity::Odd : Parity::Even;
      const SeriesState s400 = build_series(paper, {E, parity}, 400, ctx);
      const SeriesState s600 = build_series(paper, {E, parity}, 600, ctx);
      const ZeroScan zeros = find_zeros(s600, BigReal(ctx, "7.5"), ctx);
      for (int i = 0; i < 20; ++i) {
        const BigReal x = BigReal::from_double(ctx, ux(rng));
        const Residual c = conservation_residual(s400, x);
        ++total;
        if (c.within_floor()) ++within;
        if (c.value.is_zero() || c.value.log10_abs() < tolerance::kConservationDiag) ++below60;

        bool clear = true;
        for (const BigReal& z : zeros.zeros) {
          if (std::fabs(z.to_double() - x.to_double()) < tolerance::kZeroClearance) clear = false;
        }
        if (!clear) continue;
        const Residual r = riccati_residual(s600, x);
        ++r_total;
        const double lg = r.value.is_zero() ? -1e9 : r.value.log10_abs();
        r_worst = std::max(r_worst, lg);
        if (lg < tolerance::kRiccati) ++r_ok;
      }
    }
    diag("Eq. (6) residual within its per-evaluation noise floor: " + std::to_string(within) + "/" +
         std::to_string(total) + "; |C| < 1e-60 (diagnostic): " + std::to_string(below60) + "/" +
         std::to_string(total));
    verdict(4, within == total, "conservation residual below the noise floor (20 pairs x 20 points, N=400)");
    diag("Riccati residual < 1e-50 at " + std::to_string(r_ok) + "/" + std::to_string(r_total) +
         " points 0.1 away from zeros; worst log10 |residual| = " + fmt(r_worst));
    verdict(5, r_ok == r_total && r_total > 0, "Riccati residual < 1e-50 (N=600, digits=100)");
  }

  // ---------------------------------------------------------------- 6
  {
    bool ok = true;
    int nodes = 0;
    double worst = -1e9;
    for (const CertifiedLevel& l : levels) {
      if (l.n < 2 || !l.certified) continue;
      const PrecisionContext c = with_precision(l.provenance.digits);
      const SeriesState s = eigen_series(paper, l, l.provenance.order);
      const BigReal xt = turning_point(s.params, l.midpoint());
      const ZeroScan z = find_zeros(s, BigReal(c, l.provenance.cutoff), c);
      int found = 0;
      for (const BigReal& x0 : z.zeros) {
        if (!(x0 < xt)) continue;  // nodes lie in the allowed region
        ++found;
        const BigReal eps = x0 * BigReal::from_double(c, tolerance::kResidueEpsRel);
        const BigReal r = fit_residue(s, x0, eps);
        const double dev = (r + s.params.hbar).log10_abs() - s.params.hbar.log10_abs();
        worst = std::max(worst, dev);
        if (!(dev < tolerance::kResidueRel)) ok = false;
      }
      nodes += found;
      if (found != LevelTarget{l.n}.positive_nodes()) ok = false;
      diag("n=" + std::to_string(l.n) + ": " + std::to_string(found) + " positive nodes (expected " +
           std::to_string(LevelTarget{l.n}.positive_nodes()) + ")");
    }
    diag(std::to_string(nodes) + " nodes; worst log10 |residue + hbar| / hbar = " + fmt(worst));
    verdict(6, ok && nodes > 0, "residue of L/K at every node equals -hbar to >= 6 digits");
  }

  // ---------------------------------------------------------------- 7
  {
    const OracleSpectrum o = rayleigh_ritz(paper, 200);
    bool ok = true;
    double worst = 0;
    for (const CertifiedLevel& l : levels) {
      if (!l.certified) { ok = false; continue; }
      const double d = std::fabs(o.energies[l.n] - l.midpoint().to_double());
      worst = std::max(worst, d);
      ok = ok && d < tolerance::kOracle;
    }
    std::ostringstream w;
    w << std::scientific << std::setprecision(2) << worst;
    diag("max |oracle(B=200) - midpoint| over n<=9 = " + w.str());
    verdict(7, ok, "Rayleigh-Ritz agrees with certified midpoints within 1e-8");
  }

  // ---------------------------------------------------------------- 8
  {
    bool finite = true;
    double lo = 1e300, hi = 0, env_lo = 1e300, env_hi = 0;
    for (const CertifiedLevel& l : levels) {
      if (!l.certified) { finite = false; continue; }
      // N = 400 as in criterion 1's preset; statistic over n in [10, 400).
      const SeriesState s = eigen_series(paper, l, 400);
      const SuppressionStats st = suppression_stats(s, 10, 400);
      finite = finite && std::isfinite(st.sup_ratio);
      lo = std::min(lo, st.sup_ratio);
      hi = std::max(hi, st.sup_ratio);
      env_lo = std::min(env_lo, st.envelope);
      env_hi = std::max(env_hi, st.envelope);
      diag("n=" + std::to_string(l.n) + " sup|K_{n+1}/K_n|(n+1)^{2/3} = " + fmt(st.sup_ratio, 3) +
           " at n=" + std::to_string(st.sup_index) + "; envelope sup(|K_n|(n!)^{2/3})^{1/n} = " +
           fmt(st.envelope, 4));
    }
    const double spread = hi / lo;
    diag("sup-ratio spread across levels x" + fmt(spread) + " (limit x" +
         fmt(tolerance::kSuppressionSpread, 0) + "); envelope spread x" + fmt(env_hi / env_lo, 3));
    verdict(8, finite && spread < tolerance::kSuppressionSpread,
            "factorial suppression statistic finite and stable (< x10 across levels)");
  }

  // ---------------------------------------------------------------- 9
  {
    std::vector<double> sd;
    for (const CertifiedLevel& l : levels) sd.push_back(l.certified ? l.newton_significance : NAN);
    bool finite = std::all_of(sd.begin(), sd.end(), [](double v) { return std::isfinite(v); });
    double slope = NAN;
    int rises = 0;
    if (finite) {
      const double n = static_cast<double>(sd.size());
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      for (size_t i = 0; i < sd.size(); ++i) {
        sx += i; sy += sd[i]; sxx += double(i) * i; sxy += i * sd[i];
        if (i > 0 && sd[i] > sd[i - 1]) ++rises;
      }
      slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    std::string row;
    for (size_t i = 0; i < sd.size(); ++i) {
      row += (i ? ", " : "") + fmt(sd[i]);
    }
    diag("s.d.(n) = [" + row + "]; paper: 95 ... 72");
    const bool trend = finite && slope < 0 && rises <= 2;
    const bool drop = finite && sd.back() < sd.front() - tolerance::kSignificanceDrop;
    diag("trend slope " + fmt(slope) + " digits/level, " + std::to_string(rises) +
         " local rises; drop s.d.(0) - s.d.(9) = " + fmt(finite ? sd.front() - sd.back() : NAN) +
         " (required > 15)");
    verdict(9, trend && drop, "Newton-bound significance decreases, s.d.(9) < s.d.(0) - 15");
  }

  // ---------------------------------------------------------------- 10
  {
    bool ok = true;
    const std::regex shape("^B*I?A*$");
    for (int n : {0, 1}) {
      const BigReal En(ctx, table1_values()[n]);
      const int points = tolerance::kSweepPoints / 2;
      std::string seq;
      for (int i = 0; i < points; ++i) {
        // Symmetric grid of half-width 1e-2 around E_n; the centre point is
        // the rounded Table-1 value itself, within 1e-29 of E_n.
        const BigReal E = En + BigReal(ctx, "1e-2") * BigReal(ctx, 2L * i - (points - 1)) /
                                   BigReal(ctx, points - 1);
        const Classification c =
            classify_energy(paper, {n}, E, BigReal(ctx, "7.5"), 600, ctx);
        seq += c.verdict == Verdict::Below ? 'B' : c.verdict == Verdict::Above ? 'A' : 'I';
      }
      const bool good = std::regex_match(seq, shape) && seq.front() == 'B' && seq.back() == 'A';
      ok = ok && good;
      diag("n=" + std::to_string(n) + ": " + seq);
    }
    verdict(10, ok, "verdict sequences are Below*, Indeterminate?, Above* (50 points)");
  }

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "acceptance: " << (10 - failures) << "/10 criteria pass (" << fmt(secs, 1)
            << " s)\n";
  return failures == 0 ? 0 : 1;
}
