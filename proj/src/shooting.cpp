#include "pdm/shooting.hpp"

#include <cmath>
#include <string>

#include "pdm/error.hpp"

namespace pdm::oracle {

namespace {

std::pair<double, double> default_bracket(const well::WellSpec& spec, int n) {
  const double seed = well::energy(spec, n);
  // E_{n-1}/E_n = 1 - (2n-1)/n^2, which enters +-20% from n = 10 on.
  const double width = n <= 9 ? 0.2 : 0.5 * (2.0 * n - 1.0) / (double(n) * n);
  // Skewed so that no bisection midpoint lands on the seed itself.
  return {seed * (1.0 - width), seed * (1.0 + 1.1 * width)};
}

}  // namespace

BoundaryShot shoot(const well::WellSpec& spec, double E, int steps) {
  if (steps < 2) throw DomainError("shoot: need at least 2 ODE steps");
  const double gamma = spec.gamma();
  const double h = spec.L() / steps;
  const double kappa = 0.25 * gamma * gamma + 2.0 * spec.m() * E / (spec.hbar() * spec.hbar());

  auto rhs = [&](double x, double psi, double dpsi, double& out_psi, double& out_dpsi) {
    const double u = 1.0 + gamma * x;
    out_psi = dpsi;
    out_dpsi = -2.0 * gamma / u * dpsi - kappa * psi / (u * u);
  };

  double psi = 0.0, dpsi = 1.0;
  int nodes = 0;
  for (int i = 0; i < steps; ++i) {
    const double x = i * h;
    double k1p, k1d, k2p, k2d, k3p, k3d, k4p, k4d;
    rhs(x, psi, dpsi, k1p, k1d);
    rhs(x + 0.5 * h, psi + 0.5 * h * k1p, dpsi + 0.5 * h * k1d, k2p, k2d);
    rhs(x + 0.5 * h, psi + 0.5 * h * k2p, dpsi + 0.5 * h * k2d, k3p, k3d);
    rhs(x + h, psi + h * k3p, dpsi + h * k3d, k4p, k4d);
    const double next = psi + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    if (i > 0 && i + 1 < steps && (next > 0.0) != (psi > 0.0)) ++nodes;
    psi = next;
  }
  return {psi, nodes};
}

ShootingResult shoot_eigenvalue(const well::WellSpec& spec, int n, const ShootingSpec& sh) {
  if (n < 1) throw DomainError("shoot_eigenvalue: n must be >= 1");
  auto [lo, hi] = sh.energy_bracket.value_or(default_bracket(spec, n));
  if (!(hi > lo)) throw BracketError("shoot_eigenvalue: empty energy bracket");

  double f_lo = shoot(spec, lo, sh.ode_steps).psi_at_L;
  const double f_hi = shoot(spec, hi, sh.ode_steps).psi_at_L;
  if ((f_lo > 0.0) == (f_hi > 0.0)) {
    throw BracketError("shoot_eigenvalue: psi(L) does not change sign on [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");
  }

  int iter = 0;
  double mid = 0.5 * (lo + hi);
  for (; iter < sh.max_iterations; ++iter) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = shoot(spec, mid, sh.ode_steps).psi_at_L;
    if (std::abs(f_mid) <= sh.match_tol) {
      lo = hi = mid;
      break;
    }
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  const double E = 0.5 * (lo + hi);
  const int nodes = shoot(spec, E, sh.ode_steps).interior_nodes;
  if (nodes != n - 1) {
    throw NodeCountError("shoot_eigenvalue: expected " + std::to_string(n - 1) +
                         " interior nodes, found " + std::to_string(nodes));
  }
  return {E, hi - lo, nodes, iter};
}

double shoot_eigenvalue_richardson(const well::WellSpec& spec, int n, const ShootingSpec& sh) {
  ShootingSpec fine = sh;
  fine.ode_steps = 2 * sh.ode_steps;
  const double coarse_E = shoot_eigenvalue(spec, n, sh).energy;
  const double fine_E = shoot_eigenvalue(spec, n, fine).energy;
  return (16.0 * fine_E - coarse_E) / 15.0;
}

double euler_b(const well::WellSpec& spec, double E) {
  const double gamma = spec.gamma();
  if (gamma == 0.0) throw DomainError("euler_b: the u = 1 + gamma x chart needs gamma != 0");
  const double hg = spec.hbar() * gamma;
  return 0.25 + 2.0 * spec.m() * E / (hg * hg);
}

double euler_form_check(const well::WellSpec& spec, int n, double x) {
  if (!(x > 0.0 && x < spec.L())) throw DomainError("euler_form_check: need 0 < x < L");
  const double gamma = spec.gamma();
  const double E = well::energy(spec, n);
  const double u = 1.0 + gamma * x;
  // gamma^2 b, finite at gamma = 0.
  const double coeff = 0.25 * gamma * gamma + 2.0 * spec.m() * E / (spec.hbar() * spec.hbar());
  const auto d = well::psi_n_derivatives(spec, n, x);
  const double residual = u * u * d[2] + 2.0 * gamma * u * d[1] + coeff * d[0];
  return std::abs(residual) / coeff;
}

}  // namespace pdm::oracle
