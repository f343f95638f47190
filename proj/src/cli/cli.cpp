#include "pdm/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "pdm/classical.hpp"
#include "pdm/error.hpp"
#include "pdm/qcalc.hpp"
#include "pdm/qops.hpp"
#include "pdm/shooting.hpp"
#include "pdm/well.hpp"

namespace pdm::cli {

namespace {

using std::numbers::pi;

constexpr int kDefaultRangeSteps = 50;

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_real(const std::string& text) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw DomainError("not a number: '" + text + "'");
  }
  if (used != t.size()) throw DomainError("not a number: '" + text + "'");
  return v;
}

int to_int(const std::string& text) {
  const double v = to_real(text);
  if (std::floor(v) != v || std::abs(v) > 1e9) throw DomainError("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

// Options shared by every data-emitting subcommand.
struct RunConfig {
  std::vector<std::string> gamma_L;
  std::vector<std::string> n;
  int grid_points = 201;
  std::string format = "csv";
  std::string output;
  unsigned long long seed = 12345;
};

std::vector<double> gamma_values(const RunConfig& cfg, const std::vector<double>& fallback) {
  if (cfg.gamma_L.empty()) return fallback;
  std::vector<double> values;
  for (const auto& item : cfg.gamma_L) {
    for (double v : parse_real_list(item)) values.push_back(v);
  }
  for (double v : values) {
    if (!(v > -1.0)) throw DomainError("gamma_L must exceed -1");
  }
  return values;
}

std::vector<int> level_values(const RunConfig& cfg, const std::vector<int>& fallback) {
  if (cfg.n.empty()) return fallback;
  std::vector<int> values;
  for (const auto& item : cfg.n) {
    for (int v : parse_int_list(item)) values.push_back(v);
  }
  return values;
}

void check_grid(const RunConfig& cfg) {
  if (cfg.grid_points < 2) throw DomainError("--grid-points must be >= 2");
}

void add_common(CLI::App* sub, RunConfig& cfg, bool with_levels = true) {
  sub->add_option("--gamma-L", cfg.gamma_L,
                  "gamma*L values: v, v1,v2, or a..b[:steps] (repeatable)");
  if (with_levels) sub->add_option("--n", cfg.n, "quantum numbers: n, n1,n2, or a..b (repeatable)");
  sub->add_option("--grid-points", cfg.grid_points, "samples per axis")->capture_default_str();
  sub->add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--output,-o", cfg.output, "write the dataset to this path instead of stdout");
  sub->add_option("--seed", cfg.seed, "seed for randomized ensembles")->capture_default_str();
}

void emit(const Dataset& data, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* target = &out;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + cfg.output + "'");
    target = &file;
  }
  if (cfg.format == "json") {
    write_json(data, *target);
  } else {
    write_csv(data, *target);
    for (const auto& [k, v] : data.meta) err << data.command << ": " << k << " = " << v << "\n";
  }
}

double grid_point(double lo, double hi, int i, int count) {
  return i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1);
}

// ---------------------------------------------------------------------------
// well

Dataset well_eigen(const RunConfig& cfg, int ode_steps) {
  Dataset d{"well eigen",
            {"gamma_L", "n", "k_qn", "E_n", "E_shooting", "rel_err", "shooting_bracket"},
            {},
            {}};
  oracle::ShootingSpec sh;
  sh.ode_steps = ode_steps;
  for (double gl : gamma_values(cfg, {0.0})) {
    const auto spec = well::WellSpec::dimensionless(gl);
    for (int n : level_values(cfg, {1})) {
      const auto e = well::eigen(spec, n);
      const auto shot = oracle::shoot_eigenvalue(spec, n, sh);
      d.add_row({gl, (long long)n, e.k_qn, e.energy, shot.energy,
                 std::abs(shot.energy - e.energy) / e.energy, shot.error});
    }
  }
  return d;
}

Dataset well_density(const RunConfig& cfg) {
  check_grid(cfg);
  Dataset d{"well density", {"gamma_L", "n", "x", "psi", "psi2", "envelope", "classical"}, {}, {}};
  for (double gl : gamma_values(cfg, {0.0, 1.0, 2.0, 5.0})) {
    const auto spec = well::WellSpec::dimensionless(gl);
    for (int n : level_values(cfg, {1, 2, 3})) {
      for (int i = 0; i < cfg.grid_points; ++i) {
        const double x = grid_point(0.0, spec.L(), i, cfg.grid_points);
        const double psi = well::psi_n(spec, n, x);
        d.add_row({gl, (long long)n, x, psi, psi * psi, well::density_envelope(spec, x),
                   well::classical_density(spec, x)});
      }
    }
  }
  return d;
}

Dataset well_box2d(const RunConfig& cfg, const std::vector<std::string>& pair_text) {
  check_grid(cfg);
  std::vector<std::pair<int, int>> pairs;
  for (const auto& p : pair_text) {
    const auto parts = split(p, ',');
    if (parts.size() != 2) throw DomainError("--pair expects n1,n2");
    pairs.emplace_back(to_int(parts[0]), to_int(parts[1]));
  }
  if (pairs.empty()) pairs = {{1, 1}, {1, 2}, {2, 2}, {3, 3}};

  Dataset d{"well box2d", {"gamma_L", "n1", "n2", "x", "y", "P"}, {}, {}};
  for (double gl : gamma_values(cfg, {2.0})) {
    const auto spec = well::WellSpec::dimensionless(gl);
    for (auto [n1, n2] : pairs) {
      for (int i = 0; i < cfg.grid_points; ++i) {
        const double x = grid_point(0.0, spec.L(), i, cfg.grid_points);
        for (int j = 0; j < cfg.grid_points; ++j) {
          const double y = grid_point(0.0, spec.L(), j, cfg.grid_points);
          d.add_row({gl, (long long)n1, (long long)n2, x, y, well::box2d_density(spec, n1, n2, x, y)});
        }
      }
    }
  }
  return d;
}

Dataset well_moments(const RunConfig& cfg) {
  Dataset d{"well moments",
            {"gamma_L", "n", "x_mean", "x_mean_oracle", "x2_mean", "x2_mean_oracle",
             "x2_mean_as_printed", "p_mean_oracle", "p2_mean", "p2_mean_oracle", "p2_ratio",
             "p2_over_2pi_n_limit", "uncertainty"},
            {},
            {}};
  std::vector<double> def = parse_real_list("0..5");
  for (double gl : gamma_values(cfg, def)) {
    const auto spec = well::WellSpec::dimensionless(gl);
    for (int n : level_values(cfg, {1, 2, 3})) {
      const auto closed = well::quantum_moments(spec, n);
      const auto quad = well::quantum_moments_oracle(spec, n);
      const double var_x = quad.x2_mean - quad.x_mean * quad.x_mean;
      const double var_p = quad.p2_mean - quad.p_mean * quad.p_mean;
      const double k_2pi = 2.0 * pi * n / spec.L();
      d.add_row({gl, (long long)n, closed.x_mean, quad.x_mean, closed.x2_mean, quad.x2_mean,
                 well::x2_mean_as_printed(spec, n), quad.p_mean, closed.p2_mean, quad.p2_mean,
                 closed.p2_mean / quad.p2_mean,
                 quad.p2_mean / (spec.hbar() * spec.hbar() * k_2pi * k_2pi),
                 std::sqrt(var_x * var_p) / spec.hbar()});
    }
  }
  d.meta.emplace_back("p2_ratio", "closed-form <p^2> divided by the quadrature value");
  d.meta.emplace_back("p2_over_2pi_n_limit",
                      "quadrature <p^2> divided by hbar^2 (2 pi n / L)^2; 0.25 at gamma_L = 0");
  d.meta.emplace_back("x2_mean_as_printed",
                      "variant with (1+gamma L)^2 multiplying only the logarithm; null at 0");
  return d;
}

// ---------------------------------------------------------------------------
// classical-sim

struct ClassicalOptions {
  std::string mode = "summary";
  std::string potential = "free";
  double strength = 1.0;
  double x0 = 0.25;
  double p0 = 1.0;
  double dt = 1e-3;
  long steps = 10000;
  int stride = 100;
  int bins = 50;
  double duration = 200.0;
  int ensemble = 0;
};

classical::Potential make_potential(const ClassicalOptions& o) {
  if (o.potential == "free") return classical::Potential::free();
  if (o.potential == "harmonic") return classical::Potential::harmonic(o.strength);
  if (o.potential == "linear") return classical::Potential::linear(o.strength);
  throw DomainError("unknown potential '" + o.potential + "'");
}

Dataset classical_sim(const RunConfig& cfg, const ClassicalOptions& o) {
  const auto gls = gamma_values(cfg, {2.0});
  if (gls.size() != 1) throw DomainError("classical-sim takes a single --gamma-L value");
  const double gl = gls.front();
  const auto spec = well::WellSpec::dimensionless(gl);

  classical::DynamicsConfig dyn;
  dyn.dt = o.dt;
  dyn.n_steps = o.steps;
  dyn.potential = make_potential(o);
  dyn.dp = spec.dp();
  classical::validate(dyn);

  if (o.mode == "histogram") {
    if (o.potential != "free") throw DomainError("histogram mode needs --potential free");
    std::vector<classical::PhaseState> starts;
    if (o.ensemble <= 0) {
      starts.push_back({o.x0, o.p0, 0.0});
    } else {
      std::mt19937_64 rng(cfg.seed);
      std::uniform_real_distribution<double> pos(0.0, spec.L());
      std::uniform_real_distribution<double> mom(0.5, 2.0);
      for (int i = 0; i < o.ensemble; ++i) {
        const double x = pos(rng);
        const double p = mom(rng) * ((rng() & 1u) ? 1.0 : -1.0);
        starts.push_back({x, p, 0.0});
      }
    }
    std::vector<double> density(static_cast<std::size_t>(o.bins), 0.0);
    classical::Histogram last;
    long samples = 0, reflections = 0;
    for (const auto& s : starts) {
      last = classical::box_trajectory_density(dyn, spec, {s, o.duration, o.bins});
      for (std::size_t i = 0; i < density.size(); ++i) density[i] += last.density[i] / starts.size();
      samples += last.samples;
      reflections += last.reflections;
    }
    last.density = density;
    Dataset d{"classical-sim histogram", {"bin_lo", "bin_hi", "density", "classical"}, {}, {}};
    const double lambda = spec.deformed_length();
    for (std::size_t i = 0; i < density.size(); ++i) {
      const double a = last.edges[i], b = last.edges[i + 1];
      const double ref = (qops::x_q_of_x(b, spec.dp()) - qops::x_q_of_x(a, spec.dp())) / (lambda * (b - a));
      d.add_row({a, b, density[i], ref});
    }
    d.meta.emplace_back("gamma_L", format_double(gl, 17));
    d.meta.emplace_back("trajectories", std::to_string(starts.size()));
    d.meta.emplace_back("samples", std::to_string(samples));
    d.meta.emplace_back("reflections", std::to_string(reflections));
    d.meta.emplace_back("l1_to_classical", format_double(classical::l1_to_classical(last, spec), 17));
    return d;
  }

  const auto traj = classical::simulate({o.x0, o.p0, 0.0}, dyn);
  const double h0 = classical::hamiltonian_H(traj.front(), dyn);
  auto rel_drift = [&](const classical::PhaseState& s) {
    const double h = classical::hamiltonian_H(s, dyn);
    return h0 != 0.0 ? std::abs(h - h0) / std::abs(h0) : std::abs(h - h0);
  };

  if (o.mode == "trajectory") {
    if (o.stride < 1) throw DomainError("--stride must be >= 1");
    Dataset d{"classical-sim trajectory", {"t", "x", "p", "x_q", "p_q", "H", "rel_drift"}, {}, {}};
    for (std::size_t i = 0; i < traj.size(); i += static_cast<std::size_t>(o.stride)) {
      const auto& s = traj[i];
      const auto q = classical::to_deformed(s, dyn.dp);
      d.add_row({s.t, s.x, s.p, q.x_q, q.p_q, classical::hamiltonian_H(s, dyn), rel_drift(s)});
    }
    return d;
  }
  if (o.mode != "summary") throw DomainError("unknown --mode '" + o.mode + "'");

  double max_drift = 0.0;
  for (const auto& s : traj) max_drift = std::max(max_drift, rel_drift(s));
  const auto newton = classical::newton_residual(traj, dyn);
  Dataset d{"classical-sim summary",
            {"gamma_L", "potential", "dt", "steps", "max_rel_drift", "newton_dual",
             "newton_explicit", "newton_momentum", "velocity_chart"},
            {},
            {}};
  d.add_row({gl, o.potential, o.dt, (long long)o.steps, max_drift, newton.dual_form,
             newton.explicit_form, newton.momentum_form,
             classical::velocity_chart_check(traj, dyn.dp)});
  return d;
}

// ---------------------------------------------------------------------------
// qalg

struct QalgOptions {
  std::string op;
  double q = 1.0;
  double a = 0.0;
  double b = 0.0;
  double n = 1.0;
};

Dataset qalg(const QalgOptions& o) {
  using namespace qcalc;
  std::complex<double> v;
  if (o.op == "exp") v = q_exp(o.a, o.q);
  else if (o.op == "exp-im") v = q_exp_im(o.a, o.q);
  else if (o.op == "rho") v = q_norm_rho(o.a, o.q);
  else if (o.op == "log") v = q_log(o.a, o.q);
  else if (o.op == "add") v = q_add(o.a, o.b, o.q);
  else if (o.op == "sub") v = q_sub(o.a, o.b, o.q);
  else if (o.op == "ntimes") v = q_ntimes(o.n, o.a, o.q);
  else if (o.op == "heine") v = heine_number(o.n, o.q);
  else if (o.op == "qproduct") v = q_product(o.a, o.b, o.q);
  else throw DomainError("unknown --op '" + o.op + "'");
  Dataset d{"qalg", {"op", "q", "a", "b", "n", "re", "im"}, {}, {}};
  d.add_row({o.op, o.q, o.a, o.b, o.n, v.real(), v.imag()});
  return d;
}

// ---------------------------------------------------------------------------
// translate

struct TranslateOptions {
  double eps = 0.1;
  double sigma = 0.5;
  double center = 0.0;
  double half_width = 6.0;
  double g = 0.0;
};

Dataset translate_gaussian(const RunConfig& cfg, const TranslateOptions& o) {
  check_grid(cfg);
  if (cfg.grid_points < 4) throw DomainError("translate needs --grid-points >= 4");
  if (!(o.sigma > 0.0)) throw DomainError("--sigma must be positive");
  const auto gls = gamma_values(cfg, {0.0});
  if (gls.size() != 1) throw DomainError("translate takes a single --gamma-L value");
  const auto dp = qcalc::DeformationParam::from_gamma(gls.front(), 1.0);

  auto gaussian = [&](double x) -> std::complex<double> {
    const double t = x - o.center;
    return std::exp(-t * t / (2 * o.sigma * o.sigma)) / (o.sigma * std::sqrt(2 * pi));
  };
  const auto grid = qops::uniform_grid(o.center - o.half_width, o.center + o.half_width,
                                       static_cast<std::size_t>(cfg.grid_points));
  const auto psi = qops::SampledWavefunction::sample(gaussian, grid);
  qops::PhaseFunction g;
  if (o.g != 0.0) g = [m = o.g](double) { return m; };
  const auto moved = qops::translate(psi, o.eps, dp, g);

  const double sigma_q = o.sigma * (1.0 + dp.gamma() * o.eps);
  const double shift = o.eps + dp.gamma() * o.center * o.eps;
  const double rho = qcalc::q_norm_rho(o.eps * o.g, dp.q());
  Dataset d{"translate", {"x", "re", "im", "density", "modulus", "expected_modulus"}, {}, {}};
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const double x = moved.grid()[i];
    const double t = x - o.center - shift;
    const double expected =
        rho * std::exp(-t * t / (2 * sigma_q * sigma_q)) / (std::abs(sigma_q) * std::sqrt(2 * pi));
    const auto v = moved.values()[i];
    d.add_row({x, v.real(), v.imag(), std::norm(v), std::abs(v), expected});
  }
  d.meta.emplace_back("norm", format_double(moved.integrate_density(), 17));
  d.meta.emplace_back("sigma_q", format_double(sigma_q, 17));
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> parse_real_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw DomainError("empty value list");
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    std::vector<double> out;
    for (const auto& part : split(t, ',')) out.push_back(to_real(part));
    return out;
  }
  const double lo = to_real(t.substr(0, dots));
  std::string rest = t.substr(dots + 2);
  int steps = kDefaultRangeSteps;
  if (const auto colon = rest.find(':'); colon != std::string::npos) {
    steps = to_int(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
  }
  const double hi = to_real(rest);
  if (steps < 1) throw DomainError("range needs at least one step");
  if (!(hi >= lo)) throw DomainError("range end below its start");
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(i == steps ? hi : lo + (hi - lo) * i / steps);
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  const std::string t = trim(text);
  if (t.empty()) throw DomainError("empty value list");
  std::vector<int> out;
  if (const auto dots = t.find(".."); dots != std::string::npos) {
    const int lo = to_int(t.substr(0, dots));
    const int hi = to_int(t.substr(dots + 2));
    if (hi < lo) throw DomainError("range end below its start");
    for (int i = lo; i <= hi; ++i) out.push_back(i);
    return out;
  }
  for (const auto& part : split(t, ',')) out.push_back(to_int(part));
  return out;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Position-dependent-mass quantum well and q-deformed operator toolkit", "qpdm"};
  app.require_subcommand(1);

  RunConfig cfg;

  auto* well_cmd = app.add_subcommand("well", "closed-form well physics");
  well_cmd->require_subcommand(1);
  auto* eigen_cmd = well_cmd->add_subcommand("eigen", "spectrum: closed form vs shooting");
  int ode_steps = 20000;
  add_common(eigen_cmd, cfg);
  eigen_cmd->add_option("--ode-steps", ode_steps, "RK4 steps for the shooting oracle")
      ->capture_default_str();
  auto* density_cmd = well_cmd->add_subcommand("density", "psi_n, |psi_n|^2, envelope, classical");
  add_common(density_cmd, cfg);
  auto* box_cmd = well_cmd->add_subcommand("box2d", "|psi_n1(x) psi_n2(y)|^2 on a square grid");
  std::vector<std::string> pairs;
  add_common(box_cmd, cfg, false);
  box_cmd->add_option("--pair", pairs, "n1,n2 (repeatable)");
  auto* moments_cmd = well_cmd->add_subcommand("moments", "closed-form vs quadrature moments");
  add_common(moments_cmd, cfg);

  ClassicalOptions co;
  auto* sim_cmd = app.add_subcommand("classical-sim", "classical trajectories and box histograms");
  add_common(sim_cmd, cfg, false);
  sim_cmd->add_option("--mode", co.mode, "summary, trajectory or histogram")
      ->check(CLI::IsMember({"summary", "trajectory", "histogram"}))
      ->capture_default_str();
  sim_cmd->add_option("--potential", co.potential, "free, harmonic or linear")
      ->check(CLI::IsMember({"free", "harmonic", "linear"}))
      ->capture_default_str();
  sim_cmd->add_option("--strength", co.strength, "spring constant or constant force")
      ->capture_default_str();
  sim_cmd->add_option("--x0", co.x0, "initial position")->capture_default_str();
  sim_cmd->add_option("--p0", co.p0, "initial momentum")->capture_default_str();
  sim_cmd->add_option("--dt", co.dt, "time step")->capture_default_str();
  sim_cmd->add_option("--steps", co.steps, "number of steps")->capture_default_str();
  sim_cmd->add_option("--stride", co.stride, "trajectory output stride")->capture_default_str();
  sim_cmd->add_option("--bins", co.bins, "histogram bins")->capture_default_str();
  sim_cmd->add_option("--duration", co.duration, "histogram duration")->capture_default_str();
  sim_cmd->add_option("--ensemble", co.ensemble, "random initial conditions (histogram mode)")
      ->capture_default_str();

  QalgOptions qo;
  auto* qalg_cmd = app.add_subcommand("qalg", "evaluate a q-algebra operation");
  qalg_cmd->add_option("--op", qo.op, "exp, exp-im, rho, log, add, sub, ntimes, heine, qproduct")
      ->required();
  qalg_cmd->add_option("--q", qo.q, "deformation q")->capture_default_str();
  qalg_cmd->add_option("--a,--x", qo.a, "first argument")->capture_default_str();
  qalg_cmd->add_option("--b", qo.b, "second argument")->capture_default_str();
  qalg_cmd->add_option("--n", qo.n, "repetition count for ntimes/heine")->capture_default_str();
  qalg_cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  qalg_cmd->add_option("--output,-o", cfg.output, "output path");

  TranslateOptions to;
  auto* tr_cmd = app.add_subcommand("translate", "apply the generalized translation to a Gaussian");
  add_common(tr_cmd, cfg, false);
  tr_cmd->add_option("--eps", to.eps, "displacement")->capture_default_str();
  tr_cmd->add_option("--sigma", to.sigma, "Gaussian width")->capture_default_str();
  tr_cmd->add_option("--center", to.center, "Gaussian center")->capture_default_str();
  tr_cmd->add_option("--half-width", to.half_width, "grid half-width")->capture_default_str();
  tr_cmd->add_option("--g", to.g, "constant phase momentum g")->capture_default_str();

  auto* check_cmd = app.add_subcommand("check", "run the invariant suite");
  check_cmd->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  check_cmd->add_option("--output,-o", cfg.output, "output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*eigen_cmd) emit(well_eigen(cfg, ode_steps), cfg, out, err);
    else if (*density_cmd) emit(well_density(cfg), cfg, out, err);
    else if (*box_cmd) emit(well_box2d(cfg, pairs), cfg, out, err);
    else if (*moments_cmd) emit(well_moments(cfg), cfg, out, err);
    else if (*sim_cmd) emit(classical_sim(cfg, co), cfg, out, err);
    else if (*qalg_cmd) emit(qalg(qo), cfg, out, err);
    else if (*tr_cmd) emit(translate_gaussian(cfg, to), cfg, out, err);
    else if (*check_cmd) {
      auto outcome = run_check_suite();
      emit(outcome.data, cfg, out, err);
      if (!outcome.all_passed) {
        err << "check: at least one invariant failed\n";
        return kVerificationFailure;
      }
    }
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return kDomainError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kVerificationFailure;
  }
  return kOk;
}

}  // namespace pdm::cli
