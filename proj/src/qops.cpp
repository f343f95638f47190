#include "pdm/qops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pdm/error.hpp"
#include "pdm/quadrature.hpp"

namespace pdm::qops {

namespace {

constexpr Complex kI{0.0, 1.0};

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

double check_side(double x, const DeformationParam& dp) {
  const double u = 1.0 + dp.gamma() * x;
  if (!(u > 0.0)) {
    throw SingularityError("operator evaluated at or beyond x = -1/gamma (x = " +
                           std::to_string(x) + ")");
  }
  return u;
}

// Jet of 1 + gamma x.
Jet linear_factor(double x, const DeformationParam& dp, int order) {
  std::vector<Complex> d(static_cast<std::size_t>(order) + 1, 0.0);
  d[0] = 1.0 + dp.gamma() * x;
  if (order >= 1) d[1] = dp.gamma();
  return Jet(std::move(d));
}

}  // namespace

// ---------------------------------------------------------------------------
// Jet

Jet::Jet(std::vector<Complex> derivatives) : d_(std::move(derivatives)) {
  if (d_.empty()) throw DomainError("Jet: at least the value is required");
}

Jet Jet::real(std::initializer_list<double> derivatives) {
  std::vector<Complex> d(derivatives.begin(), derivatives.end());
  return Jet(std::move(d));
}

Jet Jet::derivative() const {
  if (d_.size() < 2) throw DomainError("Jet: derivative of an order-0 jet");
  return Jet(std::vector<Complex>(d_.begin() + 1, d_.end()));
}

Jet Jet::truncated(int order) const {
  if (order < 0 || order > this->order()) throw DomainError("Jet: bad truncation order");
  return Jet(std::vector<Complex>(d_.begin(), d_.begin() + order + 1));
}

Jet operator+(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<Complex> d(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) d[static_cast<std::size_t>(k)] = a[k] + b[k];
  return Jet(std::move(d));
}

Jet operator-(const Jet& a, const Jet& b) { return a + Complex(-1.0) * b; }

Jet operator*(Complex s, const Jet& a) {
  std::vector<Complex> d(a.d_);
  for (auto& v : d) v *= s;
  return Jet(std::move(d));
}

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  std::vector<Complex> d(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    Complex acc = 0.0;
    for (int j = 0; j <= k; ++j) acc += binomial(k, j) * a[j] * b[k - j];
    d[static_cast<std::size_t>(k)] = acc;
  }
  return Jet(std::move(d));
}

// ---------------------------------------------------------------------------
// AnalyticTestFunction

AnalyticTestFunction::AnalyticTestFunction(Evaluator eval) : eval_(std::move(eval)) {
  if (!eval_) throw DomainError("AnalyticTestFunction: empty evaluator");
}

Jet AnalyticTestFunction::jet(double x) const {
  const auto d = eval_(x);
  return Jet(std::vector<Complex>(d.begin(), d.end()));
}

double AnalyticTestFunction::fd_consistency(std::span<const double> xs) const {
  double worst = 0.0;
  for (double x : xs) {
    const double h = 1e-5 * std::max(1.0, std::abs(x));
    const auto lo = eval_(x - h);
    const auto hi = eval_(x + h);
    const auto mid = eval_(x);
    for (std::size_t k = 0; k < 3; ++k) {
      const Complex fd = (hi[k] - lo[k]) / (2.0 * h);
      worst = std::max(worst, std::abs(fd - mid[k + 1]));
    }
  }
  return worst;
}

AnalyticTestFunction AnalyticTestFunction::gaussian_bump(double center, double width, int power,
                                                         double wavenumber) {
  if (!(width > 0.0)) throw DomainError("gaussian_bump: width must be positive");
  if (power < 0 || power > 2) throw DomainError("gaussian_bump: power must be 0, 1 or 2");
  return AnalyticTestFunction([=](double x) {
    const double t = x - center;
    const double s2 = width * width;
    const double g = std::exp(-t * t / (2.0 * s2));
    const Jet gauss = Jet::real({g, -t / s2 * g, (t * t / (s2 * s2) - 1.0 / s2) * g,
                                 (-t * t * t / (s2 * s2 * s2) + 3.0 * t / (s2 * s2)) * g});
    const double p = power;
    const Jet poly = Jet::real({std::pow(t, p), power >= 1 ? p * std::pow(t, p - 1) : 0.0,
                                power >= 2 ? p * (p - 1) * std::pow(t, p - 2) : 0.0, 0.0});
    const Complex e = std::polar(1.0, wavenumber * x);
    const Complex ik = kI * wavenumber;
    const Jet wave({e, ik * e, ik * ik * e, ik * ik * ik * e});
    const Jet f = gauss * poly * wave;
    return Derivatives{f[0], f[1], f[2], f[3]};
  });
}

// ---------------------------------------------------------------------------
// SampledWavefunction

SampledWavefunction::SampledWavefunction(std::vector<double> grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.size() != values_.size()) {
    throw DomainError("SampledWavefunction: grid and values differ in length");
  }
  if (grid_.size() < 4) throw DomainError("SampledWavefunction: need at least 4 samples");
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    if (!std::isfinite(grid_[i]) || !std::isfinite(values_[i].real()) ||
        !std::isfinite(values_[i].imag())) {
      throw DomainError("SampledWavefunction: non-finite sample");
    }
    if (i > 0 && !(grid_[i] > grid_[i - 1])) {
      throw DomainError("SampledWavefunction: grid must be strictly increasing");
    }
  }
}

SampledWavefunction SampledWavefunction::sample(const std::function<Complex(double)>& f,
                                                std::vector<double> grid) {
  std::vector<Complex> values;
  values.reserve(grid.size());
  for (double x : grid) values.push_back(f(x));
  return SampledWavefunction(std::move(grid), std::move(values));
}

Complex SampledWavefunction::interpolate(double x) const {
  if (!(x >= grid_.front() && x <= grid_.back())) {
    throw DomainError("SampledWavefunction: x = " + std::to_string(x) +
                      " lies outside the sampled grid");
  }
  const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const auto cell = static_cast<std::ptrdiff_t>(it - grid_.begin()) - 1;
  const auto last = static_cast<std::ptrdiff_t>(grid_.size()) - 4;
  const auto first = std::clamp<std::ptrdiff_t>(cell - 1, 0, last);

  Complex acc = 0.0;
  for (std::ptrdiff_t j = first; j < first + 4; ++j) {
    double w = 1.0;
    for (std::ptrdiff_t k = first; k < first + 4; ++k) {
      if (k != j) w *= (x - grid_[static_cast<std::size_t>(k)]) /
                       (grid_[static_cast<std::size_t>(j)] - grid_[static_cast<std::size_t>(k)]);
    }
    acc += w * values_[static_cast<std::size_t>(j)];
  }
  return acc;
}

double SampledWavefunction::integrate_density(const std::function<double(double)>& weight) const {
  auto term = [&](std::size_t i) {
    const double w = weight ? weight(grid_[i]) : 1.0;
    return std::norm(values_[i]) * w;
  };
  double acc = 0.0;
  for (std::size_t i = 1; i < grid_.size(); ++i) {
    acc += 0.5 * (grid_[i] - grid_[i - 1]) * (term(i) + term(i - 1));
  }
  return acc;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points < 2 || !(hi > lo)) throw DomainError("uniform_grid: need hi > lo and >= 2 points");
  std::vector<double> g(points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo + step * static_cast<double>(i);
  g.back() = hi;
  return g;
}

// ---------------------------------------------------------------------------
// Translation

namespace {

double translation_denominator(double eps, const DeformationParam& dp) {
  const double den = 1.0 + dp.gamma() * eps;
  if (den == 0.0) throw PoleError("translate: 1 + gamma eps = 0");
  return den;
}

Complex phase_factor(const PhaseFunction& g, double x, double eps, const DeformationParam& dp,
                     double hbar) {
  if (!g) return 1.0;
  return qcalc::q_exp_im(eps * g(x) / hbar, dp.q());
}

void check_grid_side(const SampledWavefunction& psi, const DeformationParam& dp) {
  const double gamma = dp.gamma();
  if (gamma > 0.0 && !(psi.x_min() > -1.0 / gamma)) {
    throw SingularityError("translate: grid reaches x = -1/gamma");
  }
  if (gamma < 0.0 && !(psi.x_max() < -1.0 / gamma)) {
    throw SingularityError("translate: grid reaches x = -1/gamma");
  }
}

}  // namespace

SampledWavefunction translate(const SampledWavefunction& psi, double eps,
                              const DeformationParam& dp, const PhaseFunction& g, double hbar) {
  const double den = translation_denominator(eps, dp);
  check_grid_side(psi, dp);
  const double xi = dp.xi();
  const auto grid = psi.grid();
  const auto values = psi.values();

  std::vector<double> out_grid(grid.size());
  std::vector<Complex> out_values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out_grid[i] = xi * qcalc::q_add(grid[i] / xi, eps / xi, dp.q());
    out_values[i] = phase_factor(g, grid[i], eps, dp, hbar) * values[i] / den;
  }
  // 1 + gamma eps < 0 reverses the orientation of the image.
  if (den < 0.0) {
    std::reverse(out_grid.begin(), out_grid.end());
    std::reverse(out_values.begin(), out_values.end());
  }
  return SampledWavefunction(std::move(out_grid), std::move(out_values));
}

SampledWavefunction translate_onto(const SampledWavefunction& psi, double eps,
                                   const DeformationParam& dp, std::span<const double> target,
                                   const PhaseFunction& g, double hbar) {
  const double den = translation_denominator(eps, dp);
  check_grid_side(psi, dp);
  const double xi = dp.xi();
  std::vector<Complex> out(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double back = xi * qcalc::q_sub(target[i] / xi, eps / xi, dp.q());
    out[i] = phase_factor(g, back, eps, dp, hbar) * psi.interpolate(back) / den;
  }
  return SampledWavefunction(std::vector<double>(target.begin(), target.end()), std::move(out));
}

double translated_position_mean(const SampledWavefunction& psi, double eps,
                                const DeformationParam& dp, const PhaseFunction& g,
                                double hbar) {
  const auto moved = translate(psi, eps, dp, g, hbar);
  const double norm = moved.integrate_density();
  if (!(norm > 0.0)) throw DomainError("translated_position_mean: zero norm");
  return moved.integrate_density([](double x) { return x; }) / norm;
}

// ---------------------------------------------------------------------------
// Operators

Jet position_action(const Jet& f, double x) {
  std::vector<Complex> d(static_cast<std::size_t>(f.order()) + 1, 0.0);
  d[0] = x;
  if (f.order() >= 1) d[1] = 1.0;
  return Jet(std::move(d)) * f;
}

Jet momentum_action(const Jet& f, double hbar) { return (-kI * hbar) * f.derivative(); }

Jet deformed_momentum_action(const Jet& f, double x, const DeformationParam& dp, double hbar,
                             double A) {
  check_side(x, dp);
  const Jet u = linear_factor(x, dp, f.order());
  return (-kI * hbar) * (u * f).derivative() + (kI * hbar * A) * f.truncated(f.order() - 1);
}

Jet deformed_position_action(const Jet& f, double x, const DeformationParam& dp) {
  const double u = check_side(x, dp);
  const double gamma = dp.gamma();
  std::vector<Complex> d(static_cast<std::size_t>(f.order()) + 1, 0.0);
  d[0] = x_q_of_x(x, dp);
  // d^k/dx^k ln(u)/gamma = (-1)^(k-1) (k-1)! gamma^(k-1) / u^k
  double coeff = 1.0;
  for (int k = 1; k <= f.order(); ++k) {
    d[static_cast<std::size_t>(k)] = coeff / std::pow(u, k);
    coeff *= -static_cast<double>(k) * gamma;
  }
  return Jet(std::move(d)) * f;
}

Complex apply_p_q(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                  double hbar) {
  return deformed_momentum_action(f.jet(x).truncated(1), x, dp, hbar, 0.5 * dp.gamma()).value();
}

Complex apply_p_q_symmetric(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                            double hbar) {
  check_side(x, dp);
  const Jet fj = f.jet(x).truncated(1);
  const Jet u = linear_factor(x, dp, 1);
  const Complex u_then_p = u.value() * momentum_action(fj, hbar).value();
  const Complex p_then_u = momentum_action(u * fj, hbar).value();
  return 0.5 * (u_then_p + p_then_u);
}

Complex apply_p_q_squared(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                          double hbar) {
  const double A = 0.5 * dp.gamma();
  const Jet once = deformed_momentum_action(f.jet(x).truncated(2), x, dp, hbar, A);
  return deformed_momentum_action(once, x, dp, hbar, A).value();
}

double x_q_of_x(double x, const DeformationParam& dp) {
  check_side(x, dp);
  const double gamma = dp.gamma();
  if (gamma == 0.0) return x;
  return std::log1p(gamma * x) / gamma;
}

double x_of_x_q(double x_q, const DeformationParam& dp) {
  const double gamma = dp.gamma();
  if (gamma == 0.0) return x_q;
  return std::expm1(gamma * x_q) / gamma;
}

double hermiticity_residual(const AnalyticTestFunction& f, const AnalyticTestFunction& h,
                            const DeformationParam& dp, double a, double b, double hbar,
                            std::optional<double> A) {
  check_side(a, dp);
  check_side(b, dp);
  const double a_const = A.value_or(0.5 * dp.gamma());
  auto integrand = [&](double x) {
    const Jet fj = f.jet(x).truncated(1);
    const Jet hj = h.jet(x).truncated(1);
    const Complex pf = deformed_momentum_action(fj, x, dp, hbar, a_const).value();
    const Complex ph = deformed_momentum_action(hj, x, dp, hbar, a_const).value();
    return std::conj(hj.value()) * pf - std::conj(ph) * fj.value();
  };
  return std::abs(oracle::integrate_value(integrand, a, b));
}

Complex inner_product(const AnalyticTestFunction& h, const AnalyticTestFunction& f, double a,
                      double b) {
  return oracle::integrate_value(
      [&](double x) { return std::conj(h.value(x)) * f.value(x); }, a, b);
}

double commutator_check(CommutatorKind kind, const AnalyticTestFunction& f, double x,
                        const DeformationParam& dp, double hbar) {
  check_side(x, dp);
  const Jet fj = f.jet(x);
  const double A = 0.5 * dp.gamma();
  auto p = [&](const Jet& j) { return momentum_action(j, hbar); };
  auto pq = [&](const Jet& j) { return deformed_momentum_action(j, x, dp, hbar, A); };
  auto pos = [&](const Jet& j) { return position_action(j, x); };
  auto u = [&](const Jet& j) { return linear_factor(x, dp, j.order()) * j; };

  Complex lhs, rhs;
  switch (kind) {
    case CommutatorKind::xp:
      lhs = (pos(p(fj)) - p(pos(fj))).value();
      rhs = kI * hbar * fj.value();
      break;
    case CommutatorKind::xqpq: {
      auto xq = [&](const Jet& j) { return deformed_position_action(j, x, dp); };
      lhs = (xq(pq(fj)) - pq(xq(fj))).value();
      rhs = kI * hbar * fj.value();
      break;
    }
    case CommutatorKind::x_pq2:
      lhs = (pos(pq(pq(fj))) - pq(pq(pos(fj)))).value();
      rhs = (kI * hbar * (u(u(p(fj))) + p(u(u(fj))))).value();
      break;
    case CommutatorKind::p_pq2:
      lhs = (p(pq(pq(fj))) - pq(pq(p(fj)))).value();
      rhs = (-kI * hbar * dp.gamma() * (u(p(p(fj))) + p(p(u(fj))))).value();
      break;
  }
  return std::abs(lhs - rhs);
}

}  // namespace pdm::qops
