#pragma once

// Classical position-dependent-mass mechanics: the canonical map to the
// constant-mass chart (x_q, p_q), both Hamiltonians, RK4 trajectories and the
// deformed Newton law written with the dual q-derivative.

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pdm/qcalc.hpp"
#include "pdm/well.hpp"

namespace pdm::classical {

using qcalc::DeformationParam;

struct PhaseState {
  double x = 0.0;
  double p = 0.0;
  double t = 0.0;
};

struct DeformedPhaseState {
  double x_q = 0.0;
  double p_q = 0.0;
  double t = 0.0;
};

/// V(x) and, ideally, its analytic derivative.
///
/// Without dV a central finite difference is used and results computed with
/// it report reduced_precision().
class Potential {
 public:
  using Fn = std::function<double(double)>;

  Potential();  // V = 0
  explicit Potential(Fn V, Fn dV = {});

  static Potential free() { return Potential(); }
  /// V = k x^2 / 2.
  static Potential harmonic(double k);
  /// V = -F x, i.e. a constant force F.
  static Potential linear(double force);

  double value(double x) const { return V_(x); }
  double derivative(double x) const;
  double force(double x) const { return -derivative(x); }
  bool reduced_precision() const noexcept { return !dV_; }

 private:
  Fn V_;
  Fn dV_;
};

struct DynamicsConfig {
  double dt = 1e-3;
  long n_steps = 1000;
  Potential potential;
  double m = 1.0;
  DeformationParam dp = DeformationParam::undeformed();
};

/// Throws DomainError unless dt > 0, n_steps >= 0, m > 0.
void validate(const DynamicsConfig& cfg);

/// x_q = ln(1 + gamma x)/gamma, p_q = (1 + gamma x) p. Throws
/// SingularityError when 1 + gamma x <= 0.
DeformedPhaseState to_deformed(const PhaseState& s, const DeformationParam& dp);
/// x = (exp(gamma x_q) - 1)/gamma, p = p_q exp(-gamma x_q).
PhaseState from_deformed(const DeformedPhaseState& s, const DeformationParam& dp);

/// |{x_q, p_q}_(x,p) - 1| from the analytic partial derivatives.
double poisson_bracket_check(const DeformationParam& dp, const PhaseState& sample);
/// Same bracket with central finite-difference partials of to_deformed.
double poisson_bracket_fd(const DeformationParam& dp, const PhaseState& sample);

/// Phi(x_q, p) = -p (exp(gamma x_q) - 1)/gamma, the generator of the map.
double generating_function(const DeformationParam& dp, double x_q, double p);

/// Residuals of x = -dPhi/dp and p_q = -dPhi/dx_q against to_deformed.
std::pair<double, double> generating_function_check(const DeformationParam& dp, double x_q,
                                                    double p);

/// m(x) = m / (1 + gamma x)^2.
double mass_at(const DynamicsConfig& cfg, double x);
/// K = p_q^2/2m + V(x(x_q)).
double hamiltonian_K(const DeformedPhaseState& s, const DynamicsConfig& cfg);
/// H = p^2 / 2m(x) + V(x).
double hamiltonian_H(const PhaseState& s, const DynamicsConfig& cfg);

/// Time derivatives (xdot, pdot) of the equations of motion
/// xdot = p (1 + gamma x)^2 / m, pdot = -gamma (1 + gamma x) p^2 / m - V'(x).
std::pair<double, double> velocity_field(const PhaseState& s, const DynamicsConfig& cfg);

/// One RK4 step of length cfg.dt. Throws DomainExit (bracketing the step)
/// when any stage reaches 1 + gamma x <= 0.
PhaseState step(const PhaseState& s, const DynamicsConfig& cfg);
/// RK4 step of an explicit length.
PhaseState step(const PhaseState& s, const DynamicsConfig& cfg, double dt);

/// Initial state followed by cfg.n_steps RK4 steps.
std::vector<PhaseState> simulate(const PhaseState& s0, const DynamicsConfig& cfg);

struct NewtonResiduals {
  double dual_form;      // |m D~^2 x - F(x)|
  double explicit_form;  // |m [xddot/u^2 - gamma xdot^2/u^3] - F(x)|
  double momentum_form;  // |pdot + gamma u p^2/m + V'(x)|
};

/// Maximum residuals over interior samples of a uniformly sampled
/// trajectory, with five-point central differences for the time derivatives.
/// Needs at least 5 samples.
NewtonResiduals newton_residual(std::span<const PhaseState> traj, const DynamicsConfig& cfg);

/// max |xdot/(1 + gamma x) - d x_q/dt| over interior samples, both
/// derivatives by five-point central differences.
double velocity_chart_check(std::span<const PhaseState> traj, const DeformationParam& dp);

struct Histogram {
  std::vector<double> edges;    // bins + 1 entries
  std::vector<double> density;  // normalized to unit integral
  double total_time = 0.0;
  long samples = 0;
  long reflections = 0;

  std::size_t bins() const noexcept { return density.size(); }
  /// sum_i |density_i - (bin average of reference)_i| * width_i.
  double l1_distance(const std::function<double(double, double)>& bin_average) const;
};

struct BoxRun {
  PhaseState initial;
  double duration = 0.0;
  int bins = 50;
};

/// Time-averaged position histogram of a free particle bouncing elastically
/// between x = 0 and x = L. Wall crossings are located by bisection on the
/// step length; p flips sign there and the remainder of the step resumes.
Histogram box_trajectory_density(const DynamicsConfig& cfg, const well::WellSpec& spec,
                                 const BoxRun& run);

/// L1 distance of a histogram to the closed-form classical density.
double l1_to_classical(const Histogram& h, const well::WellSpec& spec);

}  // namespace pdm::classical
