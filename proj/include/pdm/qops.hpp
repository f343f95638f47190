#pragma once

// Generalized translation, the Hermitian deformed momentum p_q and the
// conjugate position x_q acting on concrete wavefunctions.

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "pdm/qcalc.hpp"

namespace pdm::qops {

using Complex = std::complex<double>;
using qcalc::DeformationParam;

/// Value and derivatives f, f', f'', ... of a function at a single point.
///
/// Operators act on jets: multiplication by a smooth function keeps the
/// order (Leibniz rule), differentiation lowers it by one.
class Jet {
 public:
  explicit Jet(std::vector<Complex> derivatives);

  /// Highest derivative carried.
  int order() const noexcept { return static_cast<int>(d_.size()) - 1; }
  Complex operator[](int k) const { return d_.at(static_cast<std::size_t>(k)); }
  Complex value() const { return d_.front(); }

  /// Jet of a real function with the given derivatives.
  static Jet real(std::initializer_list<double> derivatives);

  Jet derivative() const;
  Jet truncated(int order) const;

  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(Complex s, const Jet& a);
  /// Leibniz product.
  friend Jet operator*(const Jet& a, const Jet& b);

 private:
  std::vector<Complex> d_;
};

/// Closed-form test function: f and its first three derivatives.
class AnalyticTestFunction {
 public:
  using Derivatives = std::array<Complex, 4>;
  using Evaluator = std::function<Derivatives(double)>;

  explicit AnalyticTestFunction(Evaluator eval);

  Complex value(double x) const { return eval_(x)[0]; }
  Complex d1(double x) const { return eval_(x)[1]; }
  Complex d2(double x) const { return eval_(x)[2]; }
  Complex d3(double x) const { return eval_(x)[3]; }
  Jet jet(double x) const;

  /// Largest |f^(k+1) - central FD of f^(k)| over xs and k = 0, 1, 2.
  double fd_consistency(std::span<const double> xs) const;

  /// (x-c)^power * exp(-(x-c)^2 / 2 width^2) * exp(i wavenumber x), power in {0, 1, 2}.
  static AnalyticTestFunction gaussian_bump(double center, double width, int power,
                                            double wavenumber = 0.0);

 private:
  Evaluator eval_;
};

/// Momentum-valued phase g(x) of the translation; empty means g = 0.
using PhaseFunction = std::function<double(double)>;

/// Complex function sampled on a strictly increasing grid.
class SampledWavefunction {
 public:
  /// Throws DomainError on size mismatch, fewer than 4 points, a grid that is
  /// not strictly increasing, or non-finite values.
  SampledWavefunction(std::vector<double> grid, std::vector<Complex> values);

  static SampledWavefunction sample(const std::function<Complex(double)>& f,
                                    std::vector<double> grid);

  std::span<const double> grid() const noexcept { return grid_; }
  std::span<const Complex> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return grid_.size(); }
  double x_min() const noexcept { return grid_.front(); }
  double x_max() const noexcept { return grid_.back(); }

  /// Four-point Lagrange (cubic) interpolation. Throws DomainError outside
  /// [x_min, x_max].
  Complex interpolate(double x) const;

  /// Trapezoid integral of |psi|^2 * weight(x) (weight = 1 when empty).
  double integrate_density(const std::function<double(double)>& weight = {}) const;

 private:
  std::vector<double> grid_;
  std::vector<Complex> values_;
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

/// psi_eps(x) = exp_q[i eps g(b(x)) / hbar] psi(b(x)) / (1 + gamma eps) with
/// b(x) = xi (x/xi (-)_q eps/xi).
///
/// The result lives on the forward image of psi's grid, so every back-mapped
/// point is a sample of psi and no interpolation happens. Throws PoleError
/// when 1 + gamma eps = 0.
SampledWavefunction translate(const SampledWavefunction& psi, double eps,
                              const DeformationParam& dp, const PhaseFunction& g = {},
                              double hbar = 1.0);

/// As translate(), resampled onto `target` by cubic interpolation of psi.
/// Back-mapped points outside psi's grid are a DomainError.
SampledWavefunction translate_onto(const SampledWavefunction& psi, double eps,
                                   const DeformationParam& dp, std::span<const double> target,
                                   const PhaseFunction& g = {}, double hbar = 1.0);

/// Normalized expectation <x>_eps = int x |psi_eps|^2 / int |psi_eps|^2.
double translated_position_mean(const SampledWavefunction& psi, double eps,
                                const DeformationParam& dp, const PhaseFunction& g = {},
                                double hbar = 1.0);

// Operator actions on jets at a point x. Each throws SingularityError when
// 1 + gamma x <= 0.

Jet position_action(const Jet& f, double x);
Jet momentum_action(const Jet& f, double hbar);
/// -i hbar d/dx[(1 + gamma x) f] + i hbar A f.
Jet deformed_momentum_action(const Jet& f, double x, const DeformationParam& dp, double hbar,
                             double A);
Jet deformed_position_action(const Jet& f, double x, const DeformationParam& dp);

/// p_q f at x with the Hermitian choice A = gamma/2.
Complex apply_p_q(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                  double hbar = 1.0);

/// [(1 + gamma x) p + p (1 + gamma x)] f / 2, evaluated term by term.
Complex apply_p_q_symmetric(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                            double hbar = 1.0);

/// p_q^2 f at x.
Complex apply_p_q_squared(const AnalyticTestFunction& f, double x, const DeformationParam& dp,
                          double hbar = 1.0);

/// ln(1 + gamma x)/gamma; x itself at gamma = 0. Throws SingularityError
/// when 1 + gamma x <= 0.
double x_q_of_x(double x, const DeformationParam& dp);
/// Inverse of x_q_of_x: (exp(gamma x_q) - 1)/gamma.
double x_of_x_q(double x_q, const DeformationParam& dp);

/// |<h|p f> - <p h|f>| over [a, b] by quadrature, where p is the deformed
/// momentum with constant A (gamma/2 when not given). f and h must vanish at
/// both endpoints.
double hermiticity_residual(const AnalyticTestFunction& f, const AnalyticTestFunction& h,
                            const DeformationParam& dp, double a, double b, double hbar = 1.0,
                            std::optional<double> A = std::nullopt);

/// <h|f> over [a, b] by quadrature.
Complex inner_product(const AnalyticTestFunction& h, const AnalyticTestFunction& f, double a,
                      double b);

enum class CommutatorKind { xp, xqpq, x_pq2, p_pq2 };

/// Pointwise |[L, R] f(x) - (rhs) f(x)| for
///   xp:    [x, p]       = i hbar
///   xqpq:  [x_q, p_q]   = i hbar
///   x_pq2: [x, p_q^2]   = i hbar {(1 + gamma x)^2 p + p (1 + gamma x)^2}
///   p_pq2: [p, p_q^2]   = -i hbar gamma {(1 + gamma x) p^2 + p^2 (1 + gamma x)}
double commutator_check(CommutatorKind kind, const AnalyticTestFunction& f, double x,
                        const DeformationParam& dp, double hbar = 1.0);

}  // namespace pdm::qops
