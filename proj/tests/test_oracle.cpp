#include <doctest.h>

#include "support.hpp"
#include "anharmonic/oracle.hpp"
#include "anharmonic/report.hpp"

#include <cmath>

using namespace anharmonic;
using testing_support::ctx100;

TEST_SUITE("oracle") {
  TEST_CASE("harmonic: eigenvalues (n + 1/2) hbar w0 exactly") {
    const auto h = testing_support::harmonic_params();
    for (int B : {20, 64}) {
      const OracleSpectrum s = rayleigh_ritz(h, B);
      REQUIRE(static_cast<int>(s.energies.size()) == B);
      for (int n = 0; n < B; ++n) CHECK(s.energies[n] == doctest::Approx(2.0 * n + 1).epsilon(1e-12));
    }
  }

  TEST_CASE("paper B=200: E_0 within 1e-10 of Table 1; B=100 vs 200 below 1e-9") {
    const auto p = testing_support::paper_params();
    const OracleSpectrum big = rayleigh_ritz(p, 200);
    const OracleSpectrum small = rayleigh_ritz(p, 100);
    CHECK(std::fabs(big.energies[0] - 1.0652855095437177) < 1e-10);
    for (int n = 0; n < 10; ++n) {
      CHECK(std::fabs(big.energies[n] - small.energies[n]) < 1e-9);
      CHECK(std::fabs(big.energies[n] - std::stod(table1_values()[n])) < 1e-8);
    }
  }

  TEST_CASE("invalid inputs are rejected") {
    const auto p = testing_support::paper_params();
    CHECK_THROWS_AS(rayleigh_ritz(p, 19), std::invalid_argument);
    const auto dw = PotentialParams::from_strings(ctx100(), "0.5", "-1", "0.1", "1");
    CHECK_THROWS_AS(rayleigh_ritz(dw, 100), std::invalid_argument);
    CHECK_NOTHROW(rayleigh_ritz(dw, 100, 2.0));
    CHECK_THROWS(shooting_check(p, 1.0, 0.0, Parity::Even));
  }

  TEST_CASE("shooting examples") {
    const auto h = testing_support::harmonic_params();
    const ShootingResult g = shooting_check(h, 1.0, 3.0, Parity::Even);
    CHECK(g.nodes == 0);
    CHECK(g.log10_tail == doctest::Approx(-4.5 / std::log(10.0)).epsilon(1e-3));  // psi = e^{-x^2/2}
    CHECK_FALSE(g.growing);
    CHECK(g.trusted);
    const auto p = testing_support::paper_params();
    const ShootingResult hi = shooting_check(p, 1.1, 7.5, Parity::Even);
    CHECK(hi.nodes == 1);
    const ShootingResult lo = shooting_check(p, 1.0, 7.5, Parity::Even);
    CHECK(lo.nodes == 0);
    CHECK(lo.growing);
  }

  TEST_CASE("semiclassical estimate is exact for the harmonic ladder") {
    const auto h = testing_support::harmonic_params();
    for (int n = 0; n < 6; ++n) CHECK(semiclassical_energy(h, n) == doctest::Approx(2.0 * n + 1).epsilon(1e-6));
    const auto p = testing_support::paper_params();
    CHECK(std::fabs(semiclassical_energy(p, 9) - 26.5055) < 0.1);
  }

  TEST_CASE("property: ascending, variational in B, parity blocks interleave") {
    const auto p = testing_support::paper_params();
    const OracleSpectrum s50 = rayleigh_ritz(p, 50);
    const OracleSpectrum s100 = rayleigh_ritz(p, 100);
    const OracleSpectrum s200 = rayleigh_ritz(p, 200);
    for (size_t n = 0; n + 1 < s200.energies.size(); ++n) CHECK(s200.energies[n] < s200.energies[n + 1]);
    for (int n = 0; n < 20; ++n) {
      CHECK(s100.energies[n] <= s50.energies[n] + 1e-12);
      CHECK(s200.energies[n] <= s100.energies[n] + 1e-12);
    }
    // Level parity alternates: even levels are the even-block eigenvalues,
    // and shooting confirms the node count for each low level.
    for (int n = 0; n < 6; ++n) {
      const Parity parity = n % 2 ? Parity::Odd : Parity::Even;
      const ShootingResult below = shooting_check(p, s200.energies[n] - 1e-3, 7.5, parity);
      const ShootingResult above = shooting_check(p, s200.energies[n] + 1e-3, 7.5, parity);
      CHECK(below.nodes == n / 2);
      CHECK(above.nodes == n / 2 + 1);
    }
  }
}
