#include "anharmonic/report.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace anharmonic {

const std::vector<std::string>& table1_values() {
  static const std::vector<std::string> values{
      "1.06528550954371768885709162879", "3.30687201315291350712812168469",
      "5.74795926883356330473350311848", "8.35267782578575471215525773464",
      "11.0985956226330430110864587493", "13.9699261977427993009734339568",
      "16.9547946861441513376926165088", "20.0438636041884612336414211074",
      "23.2295521799392890706470874343", "26.5055547525366174174695030067"};
  return values;
}

const std::vector<int>& table1_significance() {
  static const std::vector<int> sd{95, 93, 89, 87, 84, 81, 79, 77, 74, 72};
  return sd;
}

namespace {

int integer_digits(const BigReal& v) {
  if (v.is_zero()) return 1;
  return static_cast<int>(std::floor(v.log10_abs())) + 1;
}

std::string render(const BigReal& v, int decimals, Rounding mode) {
  const int sig = std::max(1, integer_digits(v) + decimals);
  return v.to_positional(sig, mode);
}

std::string format_fixed(double v, int places) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(places) << v;
  return out.str();
}

}  // namespace

int rendered_decimals(const CertifiedLevel& level) { return level.digits_reported; }

std::string render_lower(const CertifiedLevel& level) {
  return render(level.E_lo, rendered_decimals(level) + 2, Rounding::Down);
}

std::string render_upper(const CertifiedLevel& level) {
  return render(level.E_hi, rendered_decimals(level) + 2, Rounding::Up);
}

std::string render_midpoint(const CertifiedLevel& level, int sig_digits) {
  const BigReal mid = level.midpoint();
  const int supported = integer_digits(mid) + rendered_decimals(level);
  return mid.to_positional(std::max(1, std::min(sig_digits, supported)));
}

ordered_json params_json(const PotentialParams& params) {
  ordered_json p;
  p["m"] = params.source.m;
  p["omega0_sq"] = params.source.omega0_sq;
  p["lambda"] = params.source.lambda;
  p["hbar"] = params.source.hbar;
  return p;
}

ordered_json level_json(const CertifiedLevel& level) {
  ordered_json l;
  l["n"] = level.n;
  if (level.certified) {
    l["E_lo"] = render_lower(level);
    l["E_hi"] = render_upper(level);
    l["gap"] = level.gap.to_scientific(3, Rounding::Up);
    l["digits"] = level.digits_reported;
    l["certified"] = true;
    l["E"] = render_midpoint(level, 30);
  } else {
    l["certified"] = false;
    l["error"] = level.failure;
    l["limit"] = std::string(to_string(level.failure_limit));
  }
  ordered_json prov;
  prov["order"] = level.provenance.order;
  prov["cutoff"] = level.provenance.cutoff;
  prov["precision_digits"] = level.provenance.digits;
  prov["escalations"] = level.provenance.escalations;
  prov["escalation_causes"] = level.provenance.escalation_causes;
  prov["classifications"] = level.provenance.classifications;
  prov["newton_steps"] = level.provenance.newton_steps;
  prov["newton_significance"] = std::isnan(level.newton_significance)
                                    ? std::string("none")
                                    : format_fixed(level.newton_significance, 2);
  prov["seed"] = level.provenance.seed;
  l["provenance"] = prov;
  return l;
}

std::string emit_json(const PotentialParams& params, const std::vector<CertifiedLevel>& levels) {
  ordered_json doc;
  doc["params"] = params_json(params);
  doc["levels"] = ordered_json::array();
  for (const CertifiedLevel& l : levels) doc["levels"].push_back(level_json(l));
  return doc.dump(2) + "\n";
}

std::string emit_oracle_json(const PotentialParams& params, const OracleSpectrum& spectrum,
                             int n_lo, int n_hi) {
  ordered_json doc;
  doc["params"] = params_json(params);
  doc["levels"] = ordered_json::array();
  for (int n = n_lo; n <= n_hi && n < static_cast<int>(spectrum.energies.size()); ++n) {
    const double E = spectrum.energies[n];
    const double err = std::max(spectrum.est_error[n], 1e-13 * std::max(std::fabs(E), 1.0));
    std::ostringstream lo, hi, gap, mid;
    lo << std::setprecision(17) << E - err;
    hi << std::setprecision(17) << E + err;
    gap << std::scientific << std::setprecision(2) << 2 * err;
    mid << std::setprecision(12) << E;
    ordered_json l;
    l["n"] = n;
    l["E_lo"] = lo.str();
    l["E_hi"] = hi.str();
    l["gap"] = gap.str();
    l["digits"] = std::max(0, static_cast<int>(std::floor(-std::log10(2 * err))) - 1);
    l["certified"] = false;
    l["E"] = mid.str();
    ordered_json prov;
    prov["method"] = "rayleigh-ritz";
    prov["basis"] = spectrum.basis_size;
    prov["frequency"] = format_fixed(spectrum.frequency, 6);
    l["provenance"] = prov;
    doc["levels"].push_back(l);
  }
  return doc.dump(2) + "\n";
}

std::string reemit_json(const std::string& text) {
  return ordered_json::parse(text).dump(2) + "\n";
}

std::string emit_table(const std::vector<CertifiedLevel>& levels, bool compare_table1) {
  std::ostringstream out;
  out << std::left << std::setw(3) << "n" << "  " << std::setw(34) << "E_n (30 s.d.)" << std::setw(11)
      << "gap" << std::setw(8) << "digits" << std::setw(7) << "s.d." << std::setw(6) << "N"
      << std::setw(7) << "a";
  if (compare_table1) out << "Table 1";
  out << "\n";
  for (const CertifiedLevel& l : levels) {
    out << std::left << std::setw(3) << l.n << "  ";
    if (!l.certified) {
      out << "FAILED: " << l.failure << "\n";
      continue;
    }
    const std::string mid = render_midpoint(l, 30);
    out << std::setw(34) << mid << std::setw(11) << l.gap.to_scientific(2, Rounding::Up)
        << std::setw(8) << l.digits_reported << std::setw(7)
        << (std::isnan(l.newton_significance)
                ? std::string("-")
                : std::to_string(static_cast<int>(std::floor(l.newton_significance))))
        << std::setw(6) << l.provenance.order << std::setw(7) << l.provenance.cutoff;
    if (compare_table1 && l.n >= 0 && l.n < static_cast<int>(table1_values().size())) {
      out << (mid == table1_values()[l.n] ? "match" : "DIFFERS: " + table1_values()[l.n]);
    }
    out << "\n";
  }
  return out.str();
}

std::string emit_csv(const std::vector<CertifiedLevel>& levels) {
  std::ostringstream out;
  out << "n,certified,E_lo,E_hi,gap,digits,E,newton_significance,order,cutoff,precision_digits\n";
  for (const CertifiedLevel& l : levels) {
    out << l.n << ',' << (l.certified ? "true" : "false") << ',';
    if (l.certified) {
      out << render_lower(l) << ',' << render_upper(l) << ','
          << l.gap.to_scientific(3, Rounding::Up) << ',' << l.digits_reported << ','
          << render_midpoint(l, 30);
    } else {
      out << ",,,,";
    }
    out << ','
        << (std::isnan(l.newton_significance) ? std::string() : format_fixed(l.newton_significance, 2))
        << ',' << l.provenance.order << ',' << l.provenance.cutoff << ',' << l.provenance.digits
        << '\n';
  }
  return out.str();
}

}  // namespace anharmonic
