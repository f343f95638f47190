#include "pdm/well.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pdm/error.hpp"

namespace pdm::well {

namespace {

using std::numbers::pi;
using Complex = std::complex<double>;

// Below this |gamma L| the logarithmic ratios switch to their series.
constexpr double kSeriesThreshold = 1e-6;

// ln(1+s)/s.
double log_ratio(double s) {
  if (std::abs(s) < kSeriesThreshold) return 1.0 - s / 2.0 + s * s / 3.0;
  return std::log1p(s) / s;
}

// sum_{k >= first} (-1)^(k+1) s^k / k, the tail of the series of ln(1+s).
double log1p_tail(double s, int first) {
  if (std::abs(s) < 0.5) {
    double sum = 0.0;
    double power = std::pow(s, first);
    for (int k = first; k < first + 200; ++k) {
      const double term = ((k % 2 == 0) ? -1.0 : 1.0) * power / k;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      power *= s;
    }
    return sum;
  }
  double head = 0.0;
  double power = s;
  for (int k = 1; k < first; ++k) {
    head += ((k % 2 == 0) ? -1.0 : 1.0) * power / k;
    power *= s;
  }
  return std::log1p(s) - head;
}

// Classical <x>/L = (s - ln(1+s)) / (s ln(1+s)).
double mean_x_over_L(double s) {
  if (std::abs(s) < kSeriesThreshold) return 0.5 - s / 12.0 + s * s / 24.0;
  return -log1p_tail(s, 2) / (s * s * log_ratio(s));
}

// Classical <x^2>/L^2 = (s^2 - 2s + 2 ln(1+s)) / (2 s^2 ln(1+s)).
double mean_x2_over_L2(double s) {
  if (std::abs(s) < kSeriesThreshold) return 1.0 / 3.0 - s / 12.0 + 17.0 * s * s / 360.0;
  return log1p_tail(s, 3) / (s * s * s * log_ratio(s));
}

// [(1+s)^2 - 1] / [2 (1+s)^2 ln(1+s)]; tends to 1 as s -> 0.
double momentum_prefactor(double s) {
  return (2.0 + s) / (2.0 * (1.0 + s) * (1.0 + s) * log_ratio(s));
}

void require_level(int n) {
  if (n < 1) throw DomainError("well: quantum number must be >= 1, got " + std::to_string(n));
}

void require_inside(const WellSpec& spec, double x, const char* where) {
  if (!(x >= 0.0 && x <= spec.L())) {
    throw DomainError(std::string(where) + ": x must lie in [0, L]");
  }
}

// phi = u^{-1/2} exp(i sign k y), y = x_q(x). Each derivative multiplies by
// (alpha - j gamma)/u with alpha = i sign k - gamma/2.
std::array<Complex, 4> phase_wave_derivatives(double gamma, double k, int sign, double x) {
  const double u = 1.0 + gamma * x;
  const double y = gamma == 0.0 ? x : std::log1p(gamma * x) / gamma;
  const Complex alpha(-0.5 * gamma, sign * k);
  std::array<Complex, 4> d{};
  d[0] = std::polar(1.0 / std::sqrt(u), sign * k * y);
  for (int j = 1; j < 4; ++j) {
    d[static_cast<std::size_t>(j)] = d[static_cast<std::size_t>(j - 1)] * (alpha - double(j - 1) * gamma) / u;
  }
  return d;
}

}  // namespace

WellSpec::WellSpec(double L, double m, double hbar, DeformationParam dp)
    : L_(L), m_(m), hbar_(hbar), dp_(dp) {
  if (!(L_ > 0.0) || !std::isfinite(L_)) throw DomainError("WellSpec: L must be positive");
  if (!(m_ > 0.0) || !std::isfinite(m_)) throw DomainError("WellSpec: m must be positive");
  if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw DomainError("WellSpec: hbar must be positive");
  if (!(1.0 + dp_.gamma() * L_ > 0.0)) {
    throw DomainError("WellSpec: need 1 + gamma L > 0 (gamma L = " +
                      std::to_string(dp_.gamma() * L_) + ")");
  }
}

WellSpec WellSpec::dimensionless(double gamma_L) {
  return WellSpec(1.0, 1.0, 1.0, DeformationParam::from_gamma(gamma_L, 1.0));
}

double WellSpec::deformed_length() const { return L_ * log_ratio(gamma_L()); }

double k_qn(const WellSpec& spec, int n) {
  require_level(n);
  return n * pi / spec.deformed_length();
}

double energy(const WellSpec& spec, int n) {
  const double k = k_qn(spec, n);
  return spec.hbar() * spec.hbar() * k * k / (2.0 * spec.m());
}

double normalization(const WellSpec& spec) { return std::sqrt(2.0 / spec.deformed_length()); }

EigenResult eigen(const WellSpec& spec, int n) {
  return {n, k_qn(spec, n), energy(spec, n), normalization(spec)};
}

double psi_n(const WellSpec& spec, int n, double x) { return psi_n_derivatives(spec, n, x)[0]; }

std::array<double, 4> psi_n_derivatives(const WellSpec& spec, int n, double x) {
  const double k = k_qn(spec, n);
  if (x < 0.0 || x > spec.L()) return {0.0, 0.0, 0.0, 0.0};
  const double A = normalization(spec);
  const auto phi = phase_wave_derivatives(spec.gamma(), k, +1, x);
  return {A * phi[0].imag(), A * phi[1].imag(), A * phi[2].imag(), A * phi[3].imag()};
}

qops::AnalyticTestFunction psi_n_function(const WellSpec& spec, int n) {
  require_level(n);
  return qops::AnalyticTestFunction([spec, n](double x) {
    const auto d = psi_n_derivatives(spec, n, x);
    return qops::AnalyticTestFunction::Derivatives{d[0], d[1], d[2], d[3]};
  });
}

std::vector<double> node_positions(const WellSpec& spec, int n) {
  const double k = k_qn(spec, n);
  std::vector<double> nodes;
  for (int j = 1; j < n; ++j) nodes.push_back(qops::x_of_x_q(j * pi / k, spec.dp()));
  return nodes;
}

std::complex<double> free_eigenfunction(const DeformationParam& dp, double k, int sign, double x) {
  return free_eigenfunction_derivatives(dp, k, sign, x)[0];
}

std::array<std::complex<double>, 4> free_eigenfunction_derivatives(const DeformationParam& dp,
                                                                   double k, int sign, double x) {
  if (sign != 1 && sign != -1) throw DomainError("free_eigenfunction: sign must be +1 or -1");
  if (!(1.0 + dp.gamma() * x > 0.0)) {
    throw SingularityError("free_eigenfunction: evaluated at or beyond x = -1/gamma");
  }
  return phase_wave_derivatives(dp.gamma(), k, sign, x);
}

qops::AnalyticTestFunction free_eigenfunction_function(const DeformationParam& dp, double k,
                                                       int sign) {
  return qops::AnalyticTestFunction(
      [dp, k, sign](double x) { return free_eigenfunction_derivatives(dp, k, sign, x); });
}

Moments quantum_moments(const WellSpec& spec, int n) {
  require_level(n);
  const double L = spec.L();
  const double s = spec.gamma_L();
  const double ell = std::log1p(s);
  const double ratio = log_ratio(s);  // ln(1+s)/s
  const double n2pi2 = n * n * pi * pi;

  Moments m{};
  m.x_mean = L * mean_x_over_L(s) - L * ell / (ell * ell + 4.0 * n2pi2);
  m.x2_mean = L * L * mean_x2_over_L2(s) -
              L * L * (2.0 + s) * ratio / (2.0 * (ell * ell + n2pi2)) +
              2.0 * L * L * ratio / (ell * ell + 4.0 * n2pi2);
  m.p_mean = 0.0;

  const double k = k_qn(spec, n);
  const double g = spec.gamma();
  const Complex bracket = Complex(k, -g / 2.0) * Complex(k, g / 2.0) + g * g;
  m.p2_mean = spec.hbar() * spec.hbar() * momentum_prefactor(s) * k * k / (k * k + g * g) *
              bracket.real();
  return m;
}

double x2_mean_as_printed(const WellSpec& spec, int n) {
  require_level(n);
  const double s = spec.gamma_L();
  if (s == 0.0) return std::nan("");
  const double L = spec.L();
  const double g = spec.gamma();
  const double ell = std::log1p(s);
  const double n2pi2 = n * n * pi * pi;
  return L * L * mean_x2_over_L2(s) +
         (1.0 - (1.0 + s) * (1.0 + s) * ell) / (2.0 * g * g * (ell * ell + n2pi2)) +
         2.0 * s * ell / (g * g * (ell * ell + 4.0 * n2pi2));
}

Moments quantum_moments_oracle(const WellSpec& spec, int n, const oracle::QuadratureSpec& quad) {
  require_level(n);
  const double L = spec.L();
  const double hbar = spec.hbar();
  auto density = [&](double x) {
    const double v = psi_n(spec, n, x);
    return v * v;
  };
  Moments m{};
  m.x_mean = oracle::integrate_value([&](double x) { return x * density(x); }, 0.0, L, quad);
  m.x2_mean = oracle::integrate_value([&](double x) { return x * x * density(x); }, 0.0, L, quad);
  // <p> = -i hbar int psi psi'; for real psi the integral itself is real.
  m.p_mean = hbar * std::abs(oracle::integrate_value(
                        [&](double x) {
                          const auto d = psi_n_derivatives(spec, n, x);
                          return d[0] * d[1];
                        },
                        0.0, L, quad));
  m.p2_mean = -hbar * hbar *
              oracle::integrate_value(
                  [&](double x) {
                    const auto d = psi_n_derivatives(spec, n, x);
                    return d[0] * d[2];
                  },
                  0.0, L, quad);
  return m;
}

double uncertainty_product(const WellSpec& spec, int n) {
  const Moments m = quantum_moments_oracle(spec, n);
  const double var_x = m.x2_mean - m.x_mean * m.x_mean;
  const double var_p = m.p2_mean - m.p_mean * m.p_mean;
  return std::sqrt(var_x * var_p) / spec.hbar();
}

double classical_density(const WellSpec& spec, double x) {
  require_inside(spec, x, "classical_density");
  return 1.0 / ((1.0 + spec.gamma() * x) * spec.deformed_length());
}

Moments classical_moments(const WellSpec& spec, double E) {
  if (!(E > 0.0)) throw DomainError("classical_moments: energy must be positive");
  const double L = spec.L();
  const double s = spec.gamma_L();
  Moments m{};
  m.x_mean = L * mean_x_over_L(s);
  m.x2_mean = L * L * mean_x2_over_L2(s);
  m.p_mean = 0.0;
  m.p2_mean = 2.0 * spec.m() * E * momentum_prefactor(s);
  return m;
}

double density_envelope(const WellSpec& spec, double x) {
  require_inside(spec, x, "density_envelope");
  const double A = normalization(spec);
  return A * A / (1.0 + spec.gamma() * x);
}

double box2d_density(const WellSpec& spec, int n1, int n2, double x, double y) {
  const double a = psi_n(spec, n1, x);
  const double b = psi_n(spec, n2, y);
  return a * a * b * b;
}

}  // namespace pdm::well
