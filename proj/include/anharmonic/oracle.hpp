#pragma once

#include "anharmonic/model.hpp"

#include <optional>
#include <vector>

namespace anharmonic {

/// Double-precision Rayleigh-Ritz spectrum in a harmonic-oscillator basis.
/// Deliberately independent of `numerics`: only the double views of the
/// parameters are used.
struct OracleSpectrum {
  int basis_size = 0;
  double frequency = 0;          // basis frequency
  std::vector<double> energies;  // ascending, level n at index n
  std::vector<double> est_error; // |E(B) - E(B/2)|
};

/// Throws std::invalid_argument for B < 20 or for omega0_sq <= 0 without a
/// reference frequency.
OracleSpectrum rayleigh_ritz(const PotentialParams& params, int basis_size,
                             std::optional<double> reference_frequency = std::nullopt);

struct ShootingResult {
  int nodes = 0;             // sign changes of psi in (0, x_max]
  int tail_sign = 0;         // sign of psi(x_max)
  bool growing = false;      // psi psi' > 0 at x_max
  double log10_tail = 0;     // log10 |psi(x_max)| / max |psi|
  bool trusted = true;       // step-halving agrees on the node count
};

/// RK4 integration of psi'' = (2m/hbar^2)(V - E) psi from parity data at 0.
ShootingResult shooting_check(const PotentialParams& params, double E, double x_max,
                              Parity parity);

/// Bohr-Sommerfeld estimate: integral of sqrt(2m(E - V)) over the allowed
/// region equals pi hbar (n + 1/2). Requires omega0_sq > 0 or lambda > 0.
double semiclassical_energy(const PotentialParams& params, int n);

}  // namespace anharmonic
