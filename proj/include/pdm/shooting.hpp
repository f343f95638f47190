#pragma once

// Shooting eigen-solver for the position-dependent-mass Schroedinger ODE in
// the ordinary x chart:
//
//   -(1+gx)^2 hbar^2/2m psi'' - hbar^2 g (1+gx)/m psi' - hbar^2 g^2/8m psi = E psi
//
// It never touches the x_q-chart solution, so agreement with the closed-form
// spectrum is a genuine check of it.

#include <optional>
#include <utility>

#include "pdm/well.hpp"

namespace pdm::oracle {

struct ShootingSpec {
  /// Energy interval to bisect. Empty: the closed-form energy widened by
  /// +-20% (narrower for n >= 10 so that the neighbours stay outside).
  std::optional<std::pair<double, double>> energy_bracket;
  int ode_steps = 20000;
  double match_tol = 0.0;  // stop early once |psi(L)| falls to this or below
  int max_iterations = 200;
};

struct ShootingResult {
  double energy;
  double error;  // final bracket width
  int interior_nodes;
  int iterations;
};

struct BoundaryShot {
  double psi_at_L;
  int interior_nodes;  // sign changes of psi strictly inside (0, L)
};

/// RK4 integration from psi(0) = 0, psi'(0) = 1 at energy E.
BoundaryShot shoot(const well::WellSpec& spec, double E, int steps);

/// Bisect E on the sign of psi(L) and confirm n-1 interior nodes.
///
/// Throws BracketError when psi(L) has the same sign at both ends of the
/// bracket and NodeCountError when the converged state has the wrong number
/// of nodes.
ShootingResult shoot_eigenvalue(const well::WellSpec& spec, int n, const ShootingSpec& sh = {});

/// (16 E(2N) - E(N))/15 with N = sh.ode_steps.
double shoot_eigenvalue_richardson(const well::WellSpec& spec, int n, const ShootingSpec& sh = {});

/// Coefficient b of the Euler-form equation u^2 psi_uu + 2u psi_u + b psi = 0,
/// u = 1 + gamma x: b = 1/4 + 2mE/(hbar gamma)^2. Throws DomainError at gamma = 0.
double euler_b(const well::WellSpec& spec, double E);

/// |u^2 psi'' + 2 gamma u psi' + gamma^2 b psi| / (gamma^2 b) for psi_n at
/// 0 < x < L, i.e. the Euler-form residual multiplied through by gamma^2 and
/// normalized by its indicial coefficient. Reduces to the residual of
/// psi'' + (2mE/hbar^2) psi at gamma = 0.
double euler_form_check(const well::WellSpec& spec, int n, double x);

}  // namespace pdm::oracle
