#include "pdm/qcalc.hpp"

#include <cmath>
#include <string>

#include "pdm/error.hpp"

namespace pdm::qcalc {

namespace {

// Zero inside the q -> 1 switch band so the generic formulas below reduce to
// their classical counterparts.
double effective_c(double q) noexcept { return near_unit(q) ? 0.0 : 1.0 - q; }

bool is_integer(double n) noexcept { return std::isfinite(n) && std::floor(n) == n; }

void require_pole_free(double den, const char* where) {
  if (den == 0.0 || !std::isfinite(den)) {
    throw PoleError(std::string(where) + ": 1+(1-q)f vanishes");
  }
}

}  // namespace

DeformationParam::DeformationParam(double q, double xi) : DeformationParam(1.0 - q, xi, 0) {
  if (!std::isfinite(q)) throw DomainError("DeformationParam: q must be finite");
}

DeformationParam::DeformationParam(double one_minus_q, double xi, int)
    : one_minus_q_(one_minus_q), xi_(xi) {
  if (!std::isfinite(one_minus_q_)) throw DomainError("DeformationParam: q must be finite");
  if (!std::isfinite(xi_) || xi_ <= 0.0) {
    throw DomainError("DeformationParam: xi must be finite and positive");
  }
}

DeformationParam DeformationParam::from_gamma(double gamma, double xi) {
  if (!std::isfinite(gamma)) throw DomainError("DeformationParam: gamma must be finite");
  return DeformationParam(gamma * xi, xi, 0);
}

std::optional<double> q_exp_checked(double x, double q) noexcept {
  if (near_unit(q)) return std::exp(x);
  const double c = 1.0 - q;
  const double base = 1.0 + c * x;
  if (base <= 0.0) {
    if (c > 0.0) return 0.0;
    return std::nullopt;
  }
  return std::exp(std::log1p(c * x) / c);
}

double q_exp(double x, double q) {
  if (auto v = q_exp_checked(x, q)) return *v;
  throw PoleError("q_exp: argument at or beyond the pole 1/(q-1)");
}

std::complex<double> q_exp_im(double x, double q) {
  if (near_unit(q)) return std::polar(1.0, x);
  const double c = 1.0 - q;
  return std::exp(std::log(std::complex<double>(1.0, c * x)) / c);
}

double q_norm_rho(double x, double q) {
  const double c = effective_c(q);
  return std::sqrt(q_exp(c * x * x, q));
}

double q_log(double y, double q) {
  if (!(y > 0.0)) throw DomainError("q_log: argument must be positive");
  if (near_unit(q)) return std::log(y);
  const double c = 1.0 - q;
  return std::expm1(c * std::log(y)) / c;
}

double q_add(double a, double b, double q) noexcept {
  return a + b + effective_c(q) * a * b;
}

double q_sub(double a, double b, double q) {
  const double den = 1.0 + effective_c(q) * b;
  if (den == 0.0) throw PoleError("q_sub: b = 1/(q-1)");
  return (a - b) / den;
}

double q_ntimes(double n, double x, double q) {
  if (near_unit(q)) return n * x;
  const double c = 1.0 - q;
  const double base = 1.0 + c * x;
  if (base > 0.0) return std::expm1(n * std::log1p(c * x)) / c;
  if (!is_integer(n)) {
    throw DomainError("q_ntimes: negative base with non-integer n");
  }
  if (base == 0.0 && n < 0.0) throw PoleError("q_ntimes: zero base with negative n");
  return (std::pow(base, n) - 1.0) / c;
}

double q_product(double a, double b, double q) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("q_product: arguments must be positive");
  if (near_unit(q)) return a * b;
  const double c = 1.0 - q;
  // a^c + b^c - 1 with the leading 1 cancelled analytically; the naive sum
  // loses about log10(1/c) digits for q near 1.
  const double s = std::expm1(c * std::log(a)) + std::expm1(c * std::log(b));
  if (s <= -1.0) {
    if (c > 0.0) return 0.0;
    throw PoleError("q_product: base at or below zero for q > 1");
  }
  return std::exp(std::log1p(s) / c);
}

double dual_q_derivative_at(double f, double df, double q) {
  const double den = 1.0 + effective_c(q) * f;
  require_pole_free(den, "dual_q_derivative");
  return df / den;
}

double dual_q_second_derivative_at(double f, double df, double d2f, double q) {
  const double c = effective_c(q);
  const double den = 1.0 + c * f;
  require_pole_free(den, "dual_q_second_derivative");
  return (d2f * den - c * df * df) / (den * den * den);
}

double dual_q_derivative(const RealFunction& f, double u, double q) {
  const double h = fd_step(u);
  const double df = (f(u + h) - f(u - h)) / (2.0 * h);
  return dual_q_derivative_at(f(u), df, q);
}

double dual_q_derivative(const RealFunction& f, const RealFunction& df, double u, double q) {
  return dual_q_derivative_at(f(u), df(u), q);
}

double dual_q_second_derivative(const RealFunction& f, double u, double q) {
  const double c = effective_c(q);
  const double h = fd_step(u);
  const double wide = 100.0 * h;
  const double f0 = f(u);
  const double fp = f(u + h), fm = f(u - h);
  const double fpp = f(u + wide), fmm = f(u - wide);

  // The stencil must not straddle a pole of 1+(1-q)f.
  const double den0 = 1.0 + c * f0;
  for (double v : {fp, fm, fpp, fmm}) {
    const double den = 1.0 + c * v;
    if (den == 0.0 || (den > 0.0) != (den0 > 0.0)) {
      throw PoleError("dual_q_second_derivative: pole inside the stencil");
    }
  }
  const double df = (fp - fm) / (2.0 * h);
  const double d2f = (fpp - 2.0 * f0 + fmm) / (wide * wide);
  return dual_q_second_derivative_at(f0, df, d2f, q);
}

double dual_q_second_derivative(const RealFunction& f, const RealFunction& df,
                                const RealFunction& d2f, double u, double q) {
  return dual_q_second_derivative_at(f(u), df(u), d2f(u), q);
}

}  // namespace pdm::qcalc
