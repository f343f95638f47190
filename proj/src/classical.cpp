#include "pdm/classical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdm/error.hpp"
#include "pdm/qops.hpp"

namespace pdm::classical {

namespace {

double require_side(double x, const DeformationParam& dp) {
  const double u = 1.0 + dp.gamma() * x;
  if (!(u > 0.0)) throw SingularityError("classical: state at or beyond x = -1/gamma");
  return u;
}

// Five-point central first and second derivatives at sample i.
double d1_5pt(std::span<const double> f, std::size_t i, double h) {
  return (-f[i + 2] + 8.0 * f[i + 1] - 8.0 * f[i - 1] + f[i - 2]) / (12.0 * h);
}

double d2_5pt(std::span<const double> f, std::size_t i, double h) {
  return (-f[i + 2] + 16.0 * f[i + 1] - 30.0 * f[i] + 16.0 * f[i - 1] - f[i - 2]) / (12.0 * h * h);
}

double uniform_step(std::span<const PhaseState> traj) {
  if (traj.size() < 5) throw DomainError("trajectory needs at least 5 samples");
  const double h = traj[1].t - traj[0].t;
  if (!(h > 0.0)) throw DomainError("trajectory times must increase");
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// Potential

Potential::Potential() : V_([](double) { return 0.0; }), dV_([](double) { return 0.0; }) {}

Potential::Potential(Fn V, Fn dV) : V_(std::move(V)), dV_(std::move(dV)) {
  if (!V_) throw DomainError("Potential: V is required");
}

Potential Potential::harmonic(double k) {
  return Potential([k](double x) { return 0.5 * k * x * x; }, [k](double x) { return k * x; });
}

Potential Potential::linear(double force) {
  return Potential([force](double x) { return -force * x; }, [force](double) { return -force; });
}

double Potential::derivative(double x) const {
  if (dV_) return dV_(x);
  const double h = 1e-6 * std::max(1.0, std::abs(x));
  return (V_(x + h) - V_(x - h)) / (2.0 * h);
}

void validate(const DynamicsConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw DomainError("DynamicsConfig: dt must be positive");
  if (cfg.n_steps < 0) throw DomainError("DynamicsConfig: n_steps must be >= 0");
  if (!(cfg.m > 0.0)) throw DomainError("DynamicsConfig: m must be positive");
}

// ---------------------------------------------------------------------------
// Canonical map

DeformedPhaseState to_deformed(const PhaseState& s, const DeformationParam& dp) {
  const double u = require_side(s.x, dp);
  return {qops::x_q_of_x(s.x, dp), u * s.p, s.t};
}

PhaseState from_deformed(const DeformedPhaseState& s, const DeformationParam& dp) {
  const double gamma = dp.gamma();
  return {qops::x_of_x_q(s.x_q, dp), s.p_q * std::exp(-gamma * s.x_q), s.t};
}

double poisson_bracket_check(const DeformationParam& dp, const PhaseState& sample) {
  const double u = require_side(sample.x, dp);
  const double dxq_dx = 1.0 / u;
  const double dxq_dp = 0.0;
  const double dpq_dx = dp.gamma() * sample.p;
  const double dpq_dp = u;
  return std::abs(dxq_dx * dpq_dp - dxq_dp * dpq_dx - 1.0);
}

double poisson_bracket_fd(const DeformationParam& dp, const PhaseState& sample) {
  const double hx = 1e-6 * std::max(1.0, std::abs(sample.x));
  const double hp = 1e-6 * std::max(1.0, std::abs(sample.p));
  auto at = [&](double dx, double dpm) {
    return to_deformed({sample.x + dx, sample.p + dpm, sample.t}, dp);
  };
  const auto xp = at(hx, 0), xm = at(-hx, 0), pp = at(0, hp), pm = at(0, -hp);
  const double dxq_dx = (xp.x_q - xm.x_q) / (2 * hx);
  const double dpq_dx = (xp.p_q - xm.p_q) / (2 * hx);
  const double dxq_dp = (pp.x_q - pm.x_q) / (2 * hp);
  const double dpq_dp = (pp.p_q - pm.p_q) / (2 * hp);
  return std::abs(dxq_dx * dpq_dp - dxq_dp * dpq_dx - 1.0);
}

double generating_function(const DeformationParam& dp, double x_q, double p) {
  return -p * qops::x_of_x_q(x_q, dp);
}

std::pair<double, double> generating_function_check(const DeformationParam& dp, double x_q,
                                                    double p) {
  // -dPhi/dp = (e^{gamma x_q} - 1)/gamma, -dPhi/dx_q = p e^{gamma x_q}.
  const double x = qops::x_of_x_q(x_q, dp);
  const double p_q = p * std::exp(dp.gamma() * x_q);
  const auto image = to_deformed({x, p, 0.0}, dp);
  return {std::abs(image.x_q - x_q), std::abs(image.p_q - p_q)};
}

// ---------------------------------------------------------------------------
// Hamiltonians and dynamics

double mass_at(const DynamicsConfig& cfg, double x) {
  const double u = require_side(x, cfg.dp);
  return cfg.m / (u * u);
}

double hamiltonian_K(const DeformedPhaseState& s, const DynamicsConfig& cfg) {
  return s.p_q * s.p_q / (2.0 * cfg.m) + cfg.potential.value(qops::x_of_x_q(s.x_q, cfg.dp));
}

double hamiltonian_H(const PhaseState& s, const DynamicsConfig& cfg) {
  return s.p * s.p / (2.0 * mass_at(cfg, s.x)) + cfg.potential.value(s.x);
}

std::pair<double, double> velocity_field(const PhaseState& s, const DynamicsConfig& cfg) {
  const double gamma = cfg.dp.gamma();
  const double u = require_side(s.x, cfg.dp);
  const double xdot = s.p * u * u / cfg.m;
  const double pdot = -gamma * u * s.p * s.p / cfg.m - cfg.potential.derivative(s.x);
  return {xdot, pdot};
}

PhaseState step(const PhaseState& s, const DynamicsConfig& cfg) { return step(s, cfg, cfg.dt); }

PhaseState step(const PhaseState& s, const DynamicsConfig& cfg, double dt) {
  try {
    const auto [k1x, k1p] = velocity_field(s, cfg);
    const auto [k2x, k2p] = velocity_field({s.x + 0.5 * dt * k1x, s.p + 0.5 * dt * k1p, 0}, cfg);
    const auto [k3x, k3p] = velocity_field({s.x + 0.5 * dt * k2x, s.p + 0.5 * dt * k2p, 0}, cfg);
    const auto [k4x, k4p] = velocity_field({s.x + dt * k3x, s.p + dt * k3p, 0}, cfg);
    PhaseState out{s.x + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
                   s.p + dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p), s.t + dt};
    require_side(out.x, cfg.dp);
    return out;
  } catch (const SingularityError&) {
    throw DomainExit("step: trajectory reached x = -1/gamma between t = " + std::to_string(s.t) +
                         " and t = " + std::to_string(s.t + dt),
                     s.t, s.t + dt);
  }
}

std::vector<PhaseState> simulate(const PhaseState& s0, const DynamicsConfig& cfg) {
  validate(cfg);
  std::vector<PhaseState> traj;
  traj.reserve(static_cast<std::size_t>(cfg.n_steps) + 1);
  traj.push_back(s0);
  for (long i = 0; i < cfg.n_steps; ++i) {
    PhaseState next = step(traj.back(), cfg);
    // Keep the clock exact on a uniform grid.
    next.t = s0.t + static_cast<double>(i + 1) * cfg.dt;
    traj.push_back(next);
  }
  return traj;
}

NewtonResiduals newton_residual(std::span<const PhaseState> traj, const DynamicsConfig& cfg) {
  const double h = uniform_step(traj);
  std::vector<double> xs, ps;
  xs.reserve(traj.size());
  ps.reserve(traj.size());
  for (const auto& s : traj) {
    xs.push_back(s.x);
    ps.push_back(s.p);
  }
  const double gamma = cfg.dp.gamma();
  const double xi = cfg.dp.xi();
  const double q = cfg.dp.q();

  NewtonResiduals r{0.0, 0.0, 0.0};
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const double x = xs[i];
    const double xdot = d1_5pt(xs, i, h);
    const double xddot = d2_5pt(xs, i, h);
    const double force = cfg.potential.force(x);
    const double u = require_side(x, cfg.dp);

    // D~^2_{gamma,t} x = xi * D~^2_{q,t}(x/xi).
    const double dual = xi * qcalc::dual_q_second_derivative_at(x / xi, xdot / xi, xddot / xi, q);
    r.dual_form = std::max(r.dual_form, std::abs(cfg.m * dual - force));

    const double expl = cfg.m * (xddot / (u * u) - gamma * xdot * xdot / (u * u * u));
    r.explicit_form = std::max(r.explicit_form, std::abs(expl - force));

    const double pdot = d1_5pt(ps, i, h);
    const double p = ps[i];
    r.momentum_form =
        std::max(r.momentum_form, std::abs(pdot + gamma * u * p * p / cfg.m - force));
  }
  return r;
}

double velocity_chart_check(std::span<const PhaseState> traj, const DeformationParam& dp) {
  const double h = uniform_step(traj);
  std::vector<double> xs, xqs;
  for (const auto& s : traj) {
    xs.push_back(s.x);
    xqs.push_back(qops::x_q_of_x(s.x, dp));
  }
  const double xi = dp.xi();
  double worst = 0.0;
  for (std::size_t i = 2; i + 2 < traj.size(); ++i) {
    const double xdot = d1_5pt(xs, i, h);
    const double deformed = xi * qcalc::dual_q_derivative_at(xs[i] / xi, xdot / xi, dp.q());
    worst = std::max(worst, std::abs(deformed - d1_5pt(xqs, i, h)));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Box histogram

double Histogram::l1_distance(const std::function<double(double, double)>& bin_average) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double w = edges[i + 1] - edges[i];
    acc += std::abs(density[i] - bin_average(edges[i], edges[i + 1])) * w;
  }
  return acc;
}

Histogram box_trajectory_density(const DynamicsConfig& cfg, const well::WellSpec& spec,
                                 const BoxRun& run) {
  validate(cfg);
  const double L = spec.L();
  if (run.bins < 1) throw DomainError("box_trajectory_density: bins must be >= 1");
  if (!(run.duration > 0.0)) throw DomainError("box_trajectory_density: duration must be positive");
  if (!(run.initial.x >= 0.0 && run.initial.x <= L)) {
    throw DomainError("box_trajectory_density: initial position outside [0, L]");
  }

  Histogram hist;
  const auto bins = static_cast<std::size_t>(run.bins);
  hist.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) hist.edges[i] = L * static_cast<double>(i) / run.bins;
  std::vector<double> time_in_bin(bins, 0.0);

  auto accumulate = [&](double x_a, double x_b, double duration) {
    const double mid = std::clamp(0.5 * (x_a + x_b), 0.0, L);
    auto bin = static_cast<std::size_t>(mid / L * run.bins);
    bin = std::min(bin, bins - 1);
    time_in_bin[bin] += duration;
    ++hist.samples;
  };
  auto inside = [L](double x) { return x >= 0.0 && x <= L; };

  PhaseState s = run.initial;
  const double t_end = s.t + run.duration;
  while (s.t < t_end) {
    const double h = std::min(cfg.dt, t_end - s.t);
    PhaseState next = step(s, cfg, h);
    if (inside(next.x)) {
      accumulate(s.x, next.x, h);
      s = next;
      continue;
    }
    const double wall = next.x < 0.0 ? 0.0 : L;
    double lo = 0.0, hi = h;
    for (int i = 0; i < 80 && hi - lo > 1e-15 * h; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (inside(step(s, cfg, mid).x)) lo = mid; else hi = mid;
    }
    PhaseState at = lo > 0.0 ? step(s, cfg, lo) : s;
    accumulate(s.x, wall, lo);
    at.x = wall;
    at.p = -at.p;
    at.t = s.t + lo;
    s = at;
    ++hist.reflections;
  }

  hist.total_time = run.duration;
  hist.density.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    hist.density[i] = time_in_bin[i] / (run.duration * (hist.edges[i + 1] - hist.edges[i]));
  }
  return hist;
}

double l1_to_classical(const Histogram& h, const well::WellSpec& spec) {
  const double lambda = spec.deformed_length();
  return h.l1_distance([&](double a, double b) {
    const double span = qops::x_q_of_x(b, spec.dp()) - qops::x_q_of_x(a, spec.dp());
    return span / (lambda * (b - a));
  });
}

}  // namespace pdm::classical
