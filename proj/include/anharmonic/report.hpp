#pragma once

#include "anharmonic/model.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/solver.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace anharmonic {

using ordered_json = nlohmann::ordered_json;

/// Table 1 of the paper: 30 significant digits per level.
const std::vector<std::string>& table1_values();
/// Table 1 s.d. column.
const std::vector<int>& table1_significance();

/// Fractional decimals a certified level supports when rendered.
int rendered_decimals(const CertifiedLevel& level);

/// E_lo rounded down / E_hi rounded up to `rendered_decimals + 2` places,
/// so the printed interval still contains the certified one.
std::string render_lower(const CertifiedLevel& level);
std::string render_upper(const CertifiedLevel& level);
/// Midpoint rounded to `sig_digits` significant digits, limited to what the
/// certificate supports.
std::string render_midpoint(const CertifiedLevel& level, int sig_digits = 30);

ordered_json params_json(const PotentialParams& params);
ordered_json level_json(const CertifiedLevel& level);
/// `{"params": {...}, "levels": [...]}`; every real is a decimal string.
std::string emit_json(const PotentialParams& params, const std::vector<CertifiedLevel>& levels);
/// Oracle spectrum in the same schema with "certified": false.
std::string emit_oracle_json(const PotentialParams& params, const OracleSpectrum& spectrum,
                             int n_lo, int n_hi);

/// Parses emitted JSON and re-emits it; byte-identical for our own output.
std::string reemit_json(const std::string& text);

std::string emit_table(const std::vector<CertifiedLevel>& levels, bool compare_table1);
std::string emit_csv(const std::vector<CertifiedLevel>& levels);

}  // namespace anharmonic
