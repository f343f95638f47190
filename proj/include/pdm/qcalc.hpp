#pragma once

// Generalized (q-deformed) arithmetic: q-exponential and q-logarithm, the
// q-addition group, the n-fold q-sum and the dual q-derivative.
//
// Everything in this header is dimensionless. Dimensional callers divide
// lengths by the characteristic length xi before calling in.

#include <complex>
#include <functional>
#include <optional>

namespace pdm::qcalc {

/// Below this |1-q| every operation switches to its analytic q -> 1 limit.
inline constexpr double kUnitTolerance = 1e-8;

inline bool near_unit(double q) noexcept {
  return q - 1.0 < kUnitTolerance && 1.0 - q < kUnitTolerance;
}

/// The deformation pair (q, xi) together with gamma = (1-q)/xi.
///
/// 1-q is stored directly so that parameters built from gamma do not lose
/// digits when q is close to 1.
class DeformationParam {
 public:
  /// Throws DomainError unless q is finite and xi is finite and positive.
  DeformationParam(double q, double xi);

  /// q = 1 - gamma * xi.
  static DeformationParam from_gamma(double gamma, double xi = 1.0);
  static DeformationParam undeformed(double xi = 1.0) { return from_gamma(0.0, xi); }

  double q() const noexcept { return 1.0 - one_minus_q_; }
  double one_minus_q() const noexcept { return one_minus_q_; }
  double xi() const noexcept { return xi_; }
  /// Deformation rate, in inverse length.
  double gamma() const noexcept { return one_minus_q_ / xi_; }

  bool is_undeformed() const noexcept { return one_minus_q_ == 0.0; }

 private:
  DeformationParam(double one_minus_q, double xi, int);

  double one_minus_q_;
  double xi_;
};

/// [1+(1-q)x]_+^{1/(1-q)}. Empty when q>1 and x is at or beyond the pole
/// x = 1/(q-1).
std::optional<double> q_exp_checked(double x, double q) noexcept;

/// As q_exp_checked, throwing PoleError instead of returning empty.
double q_exp(double x, double q);

/// Principal branch of [1+(1-q)ix]^{1/(1-q)}; exp(ix) at q=1.
std::complex<double> q_exp_im(double x, double q);

/// Modulus of q_exp_im: sqrt(exp_q((1-q)x^2)).
double q_norm_rho(double x, double q);

/// (y^{1-q}-1)/(1-q). Throws DomainError for y <= 0.
double q_log(double y, double q);

/// a (+)_q b = a + b + (1-q)ab.
double q_add(double a, double b, double q) noexcept;

/// a (-)_q b = (a-b)/(1+(1-q)b). Throws PoleError when the denominator is 0.
double q_sub(double a, double b, double q);

/// n (.)_q x = {[1+(1-q)x]^n - 1}/(1-q), for real n.
///
/// Throws DomainError when 1+(1-q)x < 0 and n is not an integer.
double q_ntimes(double n, double x, double q);

/// Heine deformed number n (.)_q 1.
inline double heine_number(double n, double q) { return q_ntimes(n, 1.0, q); }

/// The q-product a (x)_q b = [a^{1-q} + b^{1-q} - 1]_+^{1/(1-q)}.
///
/// Not the same thing as q_ntimes; kept only so the two can be told apart in
/// tests. Requires a, b > 0.
double q_product(double a, double b, double q);

using RealFunction = std::function<double(double)>;

/// Finite-difference step used by the callable overloads below.
inline double fd_step(double u) noexcept {
  const double h = 1e-6 * (u < 0 ? -u : u);
  return h > 1e-6 ? h : 1e-6;
}

/// f'/(1+(1-q)f) from pointwise values.
double dual_q_derivative_at(double f, double df, double q);

/// [f''(1+(1-q)f) - (1-q)f'^2]/(1+(1-q)f)^3, the expanded nested form.
double dual_q_second_derivative_at(double f, double df, double d2f, double q);

/// Dual q-derivative with f' from a central difference of step fd_step(u).
double dual_q_derivative(const RealFunction& f, double u, double q);
double dual_q_derivative(const RealFunction& f, const RealFunction& df, double u, double q);

/// Second dual q-derivative. The callable-only overload estimates f' with
/// fd_step(u) and f'' with a 100x wider three-point stencil.
double dual_q_second_derivative(const RealFunction& f, double u, double q);
double dual_q_second_derivative(const RealFunction& f, const RealFunction& df,
                                const RealFunction& d2f, double u, double q);

}  // namespace pdm::qcalc
