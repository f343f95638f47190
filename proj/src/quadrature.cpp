#include "pdm/quadrature.hpp"

#include <array>
#include <numbers>

namespace pdm::oracle {

namespace {

constexpr int kMaxOrder = 64;

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  // Newton iteration on P_n from the Chebyshev-like initial guess; the rule is
  // symmetric so only half the roots are solved for.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int order) {
  if (order < 1 || order > kMaxOrder) {
    throw DomainError("gauss_legendre: order must lie in [1, 64]");
  }
  static const std::array<GaussLegendreRule, kMaxOrder + 1> rules = [] {
    std::array<GaussLegendreRule, kMaxOrder + 1> r{};
    for (int n = 1; n <= kMaxOrder; ++n) r[static_cast<std::size_t>(n)] = build_rule(n);
    return r;
  }();
  return rules[static_cast<std::size_t>(order)];
}

void validate(const QuadratureSpec& spec) {
  if (spec.panels < 8) throw DomainError("QuadratureSpec: panels must be >= 8");
  if (spec.order < 1 || spec.order > kMaxOrder) {
    throw DomainError("QuadratureSpec: order must lie in [1, 64]");
  }
  if (!(spec.target_rel_tol > 0.0) || !(spec.abs_tol >= 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be positive");
  }
  if (spec.max_depth < 0) throw DomainError("QuadratureSpec: max_depth must be >= 0");
}

}  // namespace pdm::oracle
