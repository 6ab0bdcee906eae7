#include "anharmonic/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace anharmonic {

namespace {

/// Eigenvalues of H restricted to basis states of one parity, |k> for
/// k = parity, parity + 2, ... < B.
std::vector<double> parity_block(const Eigen::MatrixXd& H, int B, int parity) {
  std::vector<int> idx;
  for (int k = parity; k < B; k += 2) idx.push_back(k);
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXd block(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) block(i, j) = H(idx[i], idx[j]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("oracle: eigensolve failed");
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> spectrum(const PotentialParams& params, int B, double omega) {
  const double m = params.m_d();
  const double hbar = params.hbar_d();
  const double w02 = params.omega0_sq_d();
  const double lambda = params.lambda_d();
  // x = sqrt(hbar / (2 m omega)) (a + a^dagger); X^4 couples up to |k +- 4>.
  const int M = B + 4;
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(M, M);
  const double scale = std::sqrt(hbar / (2.0 * m * omega));
  for (int k = 0; k + 1 < M; ++k) {
    X(k, k + 1) = X(k + 1, k) = scale * std::sqrt(static_cast<double>(k + 1));
  }
  const Eigen::MatrixXd X2 = X * X;
  const Eigen::MatrixXd X4 = X2 * X2;
  Eigen::MatrixXd H = 0.5 * m * (w02 - omega * omega) * X2.topLeftCorner(B, B) +
                      lambda * X4.topLeftCorner(B, B);
  for (int k = 0; k < B; ++k) H(k, k) += hbar * omega * (k + 0.5);

  // Eigenfunctions of an even potential alternate in parity: level n has
  // the parity of n.
  const std::vector<double> even = parity_block(H, B, 0);
  const std::vector<double> odd = parity_block(H, B, 1);
  std::vector<double> levels;
  for (size_t i = 0; i < std::max(even.size(), odd.size()); ++i) {
    if (i < even.size()) levels.push_back(even[i]);
    if (i < odd.size()) levels.push_back(odd[i]);
  }
  return levels;
}

}  // namespace

OracleSpectrum rayleigh_ritz(const PotentialParams& params, int B,
                             std::optional<double> reference_frequency) {
  if (B < 20) throw std::invalid_argument("rayleigh_ritz: basis size must be >= 20");
  double omega = 0.0;
  if (reference_frequency) {
    omega = *reference_frequency;
    if (!(omega > 0.0)) throw std::invalid_argument("rayleigh_ritz: reference frequency <= 0");
  } else {
    if (!(params.omega0_sq_d() > 0.0)) {
      throw std::invalid_argument(
          "rayleigh_ritz: omega0_sq <= 0 needs an explicit reference frequency");
    }
    omega = std::sqrt(params.omega0_sq_d());
  }
  OracleSpectrum out;
  out.basis_size = B;
  out.frequency = omega;
  out.energies = spectrum(params, B, omega);
  const std::vector<double> coarse = spectrum(params, B / 2, omega);
  out.est_error.resize(out.energies.size());
  for (size_t i = 0; i < out.energies.size(); ++i) {
    out.est_error[i] = i < coarse.size() ? std::fabs(out.energies[i] - coarse[i])
                                         : std::numeric_limits<double>::infinity();
  }
  return out;
}

namespace {

ShootingResult integrate(const PotentialParams& params, double E, double x_max, Parity parity,
                         int steps) {
  const double k = 2.0 * params.m_d() / (params.hbar_d() * params.hbar_d());
  auto f = [&](double x, double psi) { return k * (potential(params, x) - E) * psi; };
  double psi = parity == Parity::Even ? 1.0 : 0.0;
  double dpsi = parity == Parity::Even ? 0.0 : 1.0;
  const double h = x_max / steps;
  double x = 0.0;
  double biggest = std::fabs(psi);
  ShootingResult r;
  int last_sign = parity == Parity::Even ? 1 : 0;
  for (int i = 0; i < steps; ++i) {
    const double k1p = dpsi, k1d = f(x, psi);
    const double k2p = dpsi + 0.5 * h * k1d, k2d = f(x + 0.5 * h, psi + 0.5 * h * k1p);
    const double k3p = dpsi + 0.5 * h * k2d, k3d = f(x + 0.5 * h, psi + 0.5 * h * k2p);
    const double k4p = dpsi + h * k3d, k4d = f(x + h, psi + h * k3p);
    psi += h / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p);
    dpsi += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
    x += h;
    const int sg = (psi > 0) - (psi < 0);
    if (sg != 0) {
      if (last_sign != 0 && sg != last_sign) ++r.nodes;
      last_sign = sg;
    }
    biggest = std::max(biggest, std::fabs(psi));
  }
  r.tail_sign = (psi > 0) - (psi < 0);
  r.growing = psi * dpsi > 0;
  r.log10_tail = std::log10(std::fabs(psi) / biggest);
  return r;
}

}  // namespace

ShootingResult shooting_check(const PotentialParams& params, double E, double x_max,
                              Parity parity) {
  if (!(x_max > 0.0)) throw std::invalid_argument("shooting_check: x_max must be positive");
  const int steps = static_cast<int>(std::ceil(x_max / 5e-4));
  ShootingResult fine = integrate(params, E, x_max, parity, steps);
  const ShootingResult coarse = integrate(params, E, x_max, parity, steps / 2);
  fine.trusted = fine.nodes == coarse.nodes && fine.tail_sign == coarse.tail_sign;
  return fine;
}

double semiclassical_energy(const PotentialParams& params, int n) {
  const double m = params.m_d();
  const double hbar = params.hbar_d();
  if (params.omega0_sq_d() < 0.0 || (params.omega0_sq_d() == 0.0 && params.lambda_d() <= 0.0)) {
    throw std::invalid_argument("semiclassical_energy: needs a single-well potential");
  }
  auto action = [&](double E) {
    const double xt = turning_point(params, E);
    // Substitute x = xt sin(t) to remove the square-root endpoint.
    const int panels = 400;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
      const double t = (i + 0.5) * (std::numbers::pi / 2) / panels;
      const double x = xt * std::sin(t);
      const double excess = std::max(E - potential(params, x), 0.0);
      sum += std::sqrt(2.0 * m * excess) * xt * std::cos(t);
    }
    return 2.0 * sum * (std::numbers::pi / 2) / panels;  // both sides of x = 0
  };
  const double goal = std::numbers::pi * hbar * (n + 0.5);
  double lo = 1e-12, hi = 1.0;
  while (action(hi) < goal) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-14 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (action(mid) < goal ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace anharmonic
