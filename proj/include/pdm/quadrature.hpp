#pragma once

// Adaptive composite Gauss-Legendre quadrature, the numerical ground truth
// used to check every closed-form integral in the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <type_traits>
#include <utility>
#include <vector>

#include "pdm/error.hpp"

namespace pdm::oracle {

struct QuadratureSpec {
  int panels = 16;               // initial uniform panels, >= 8
  int order = 10;                // Gauss-Legendre points per panel
  double target_rel_tol = 1e-13; // relative to the integral of |f|
  double abs_tol = 1e-15;
  int max_depth = 40;            // bisections of a single initial panel
};

template <class T>
struct QuadratureResult {
  T value{};
  double error = 0.0;  // sum over accepted panels of |fine - coarse|
  bool converged = true;
  long evaluations = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached rule for 1 <= order <= 64.
const GaussLegendreRule& gauss_legendre(int order);

void validate(const QuadratureSpec& spec);

namespace detail {

template <class F, class T>
T panel_sum(F& f, const GaussLegendreRule& rule, double a, double b, long& evals) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  evals += static_cast<long>(rule.nodes.size());
  return acc * half;
}

}  // namespace detail

/// Integrate f over [a, b]. f may return double or std::complex<double>.
///
/// Each panel is compared against the sum over its two halves and bisected
/// until the difference falls below its share of the error budget,
/// max(target_rel_tol * integral|f|, abs_tol). Panels still unresolved at
/// max_depth are accepted and the result is flagged non-converged.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec = {})
    -> QuadratureResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  validate(spec);
  QuadratureResult<T> out;
  if (a == b) return out;

  const auto& rule = gauss_legendre(spec.order);
  const double width = b - a;

  struct Panel {
    double lo, hi;
    T coarse;
    int depth;
  };
  std::vector<Panel> stack;
  stack.reserve(static_cast<std::size_t>(spec.panels) + 4 * static_cast<std::size_t>(spec.max_depth));

  // Scale for the relative tolerance: integral of |f| on the initial panels.
  auto abs_f = [&f](double x) { return std::abs(f(x)); };
  double scale = 0.0;
  for (int i = spec.panels - 1; i >= 0; --i) {
    const double lo = a + width * i / spec.panels;
    const double hi = (i + 1 == spec.panels) ? b : a + width * (i + 1) / spec.panels;
    scale += std::abs(detail::panel_sum<decltype(abs_f), double>(abs_f, rule, lo, hi, out.evaluations));
    stack.push_back({lo, hi, detail::panel_sum<F, T>(f, rule, lo, hi, out.evaluations), 0});
  }
  const double budget = std::max(spec.target_rel_tol * scale, spec.abs_tol);

  while (!stack.empty()) {
    Panel p = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (p.lo + p.hi);
    const T left = detail::panel_sum<F, T>(f, rule, p.lo, mid, out.evaluations);
    const T right = detail::panel_sum<F, T>(f, rule, mid, p.hi, out.evaluations);
    const T fine = left + right;
    const double diff = std::abs(fine - p.coarse);
    const double allowed = budget * std::abs(p.hi - p.lo) / std::abs(width);
    if (diff <= allowed || p.depth >= spec.max_depth) {
      if (diff > allowed) out.converged = false;
      out.value += fine;
      out.error += diff;
      continue;
    }
    stack.push_back({mid, p.hi, right, p.depth + 1});
    stack.push_back({p.lo, mid, left, p.depth + 1});
  }
  return out;
}

/// integrate(), throwing ConvergenceError on a non-converged result.
template <class F>
auto integrate_value(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  auto r = integrate(std::forward<F>(f), a, b, spec);
  if (!r.converged) throw ConvergenceError("integrate: error target not reached");
  return r.value;
}

}  // namespace pdm::oracle
