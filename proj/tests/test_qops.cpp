#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "support.hpp"

#include "pdm/error.hpp"
#include "pdm/qcalc.hpp"
#include "pdm/qops.hpp"
#include "pdm/well.hpp"

using namespace pdm::qops;
using pdm::qcalc::DeformationParam;
using testing::kE;
using testing::kPi;
using testing::rel_diff;

namespace {

const Complex kI{0.0, 1.0};

double gaussian(double x, double center, double sigma) {
  const double t = x - center;
  return std::exp(-t * t / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * kPi));
}

SampledWavefunction sampled_gaussian(double center, double sigma, double lo, double hi,
                                     std::size_t points) {
  return SampledWavefunction::sample([&](double x) { return Complex(gaussian(x, center, sigma)); },
                                     uniform_grid(lo, hi, points));
}

double trapezoid_abs(const SampledWavefunction& psi) {
  double acc = 0.0;
  const auto g = psi.grid();
  const auto v = psi.values();
  for (std::size_t i = 1; i < g.size(); ++i) {
    acc += 0.5 * (g[i] - g[i - 1]) * (std::abs(v[i]) + std::abs(v[i - 1]));
  }
  return acc;
}

AnalyticTestFunction constant_one() {
  return AnalyticTestFunction([](double) { return AnalyticTestFunction::Derivatives{1.0, 0.0, 0.0, 0.0}; });
}

}  // namespace

TEST_CASE("jet arithmetic follows the Leibniz rule") {
  const Jet a = Jet::real({2.0, 3.0, 5.0, 7.0});
  const Jet b = Jet::real({-1.0, 4.0, 0.5, 2.0});
  const Jet p = a * b;
  CHECK(p[0] == Complex(-2.0));
  CHECK(p[1] == Complex(3.0 * -1.0 + 2.0 * 4.0));
  CHECK(p[2] == Complex(5.0 * -1.0 + 2 * 3.0 * 4.0 + 2.0 * 0.5));
  CHECK(p[3] == Complex(7.0 * -1.0 + 3 * 5.0 * 4.0 + 3 * 3.0 * 0.5 + 2.0 * 2.0));
  CHECK(a.derivative().order() == 2);
  CHECK(a.derivative()[0] == Complex(3.0));
  CHECK(a.truncated(1).order() == 1);
  CHECK_THROWS(Jet(std::vector<Complex>{}));
}

TEST_CASE("gaussian bump family is self-consistent") {
  std::vector<double> xs = {-0.7, -0.2, 0.0, 0.15, 0.4, 0.9};
  for (int power : {0, 1, 2}) {
    for (double k : {0.0, 2.5}) {
      const auto f = AnalyticTestFunction::gaussian_bump(0.1, 0.3, power, k);
      CHECK(f.fd_consistency(xs) < 1e-6);
    }
  }
  CHECK_THROWS_AS(AnalyticTestFunction::gaussian_bump(0.0, 1.0, 3), pdm::DomainError);
  CHECK_THROWS_AS(AnalyticTestFunction::gaussian_bump(0.0, -1.0, 0), pdm::DomainError);
}

TEST_CASE("sampled wavefunction validation and interpolation") {
  CHECK_THROWS_AS(SampledWavefunction({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}), pdm::DomainError);
  CHECK_THROWS_AS(SampledWavefunction({0.0, 2.0, 1.0, 3.0}, {1.0, 1.0, 1.0, 1.0}), pdm::DomainError);
  CHECK_THROWS_AS(SampledWavefunction({0.0, 1.0, 2.0, 3.0}, {1.0, NAN, 1.0, 1.0}), pdm::DomainError);
  auto cubic = [](double x) { return Complex(x * x * x - 2 * x, 0.5 * x); };
  const auto psi = SampledWavefunction::sample(cubic, uniform_grid(-1.0, 2.0, 13));
  for (double x : {-1.0, -0.33, 0.5, 1.71, 2.0}) CHECK(std::abs(psi.interpolate(x) - cubic(x)) < 1e-13);
  CHECK_THROWS_AS(psi.interpolate(2.01), pdm::DomainError);
  CHECK_THROWS_AS(psi.interpolate(-1.5), pdm::DomainError);
}

TEST_CASE("translation by zero is the identity") {
  const auto psi = sampled_gaussian(0.2, 0.4, -3.0, 3.0, 301);
  for (double gamma : {0.0, 0.3, -0.2}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    for (bool with_phase : {false, true}) {
      PhaseFunction g;
      if (with_phase) g = [](double x) { return 1.0 + x; };
      const auto out = translate(psi, 0.0, dp, g);
      for (std::size_t i = 0; i < psi.size(); ++i) {
        CHECK(out.grid()[i] == psi.grid()[i]);
        CHECK(out.values()[i] == psi.values()[i]);
      }
    }
  }
}

TEST_CASE("undeformed translation is a pure shift") {
  const auto dp = DeformationParam::undeformed();
  const auto psi = sampled_gaussian(0.0, 0.5, -4.0, 4.0, 801);
  const auto target = uniform_grid(-2.0, 2.0, 81);
  const auto out = translate_onto(psi, 0.3, dp, target);
  for (std::size_t i = 0; i < target.size(); ++i) {
    CHECK(std::abs(out.values()[i] - gaussian(target[i] - 0.3, 0.0, 0.5)) < 1e-8);
  }
}

TEST_CASE("translated gaussian keeps its shape with a stretched width") {
  struct Case {
    double gamma, center, sigma, lo, hi;
  };
  const double eps = 0.2;
  for (const Case c : {Case{0.5, 0.3, 0.25, -1.2, 1.8}, Case{-0.4, 0.3, 0.25, -1.2, 1.8},
                       Case{2.0, 0.3, 0.1, -0.3, 0.9}}) {
    const auto dp = DeformationParam::from_gamma(c.gamma);
    const auto psi = sampled_gaussian(c.center, c.sigma, c.lo, c.hi, 451);
    const auto out = translate(psi, eps, dp);
    const double s = 1.0 + c.gamma * eps;
    for (std::size_t i = 0; i < out.size(); ++i) {
      const double x = out.grid()[i];
      // Width sigma(1+gamma eps) and center eps + center(1+gamma eps).
      const double expected = gaussian(x, eps + c.center * s, c.sigma * s);
      CHECK(std::abs(out.values()[i] - expected) < 1e-12 * gaussian(0.0, 0.0, c.sigma * s));
    }
    CHECK(std::abs(out.integrate_density() * s * 2 * std::sqrt(kPi) * c.sigma - 1.0) < 1e-6);
  }
}

TEST_CASE("translation composes through q-addition") {
  const double e1 = 0.15, e2 = -0.1;
  for (double gamma : {0.25, -0.3}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    const double combined = pdm::qcalc::q_add(e1, e2, dp.q());
    const auto psi = sampled_gaussian(0.0, 0.4, -3.0, 3.0, 601);

    // On the forward-mapped grids the two routes must agree exactly up to rounding.
    const auto twice = translate(translate(psi, e1, dp), e2, dp);
    const auto once = translate(psi, combined, dp);
    for (std::size_t i = 0; i < psi.size(); ++i) {
      CHECK(std::abs(twice.grid()[i] - once.grid()[i]) < 1e-13);
      CHECK(std::abs(twice.values()[i] - once.values()[i]) < 1e-13);
    }

    // Through cubic interpolation: error O(dx^4).
    const auto target = uniform_grid(-1.5, 1.5, 61);
    auto error_at = [&](std::size_t points) {
      const auto p = sampled_gaussian(0.0, 0.4, -3.0, 3.0, points);
      const auto step1 = translate_onto(p, e1, dp, uniform_grid(-2.5, 2.5, points));
      const auto two = translate_onto(step1, e2, dp, target);
      const auto one = translate_onto(p, combined, dp, target);
      double worst = 0.0;
      for (std::size_t i = 0; i < target.size(); ++i) {
        worst = std::max(worst, std::abs(two.values()[i] - one.values()[i]));
      }
      return worst;
    };
    const double coarse = error_at(151), fine = error_at(301);
    CHECK(coarse < 1e-5);
    CHECK(fine < coarse / 10.0);
  }
}

TEST_CASE("translate_onto refuses to extrapolate") {
  const auto psi = sampled_gaussian(0.0, 0.3, -1.0, 1.0, 101);
  const auto target = uniform_grid(-1.0, 1.0, 11);
  CHECK_THROWS_AS(translate_onto(psi, 0.5, DeformationParam::undeformed(), target), pdm::DomainError);
}

TEST_CASE("translation at the pole 1 + gamma eps = 0") {
  const auto psi = sampled_gaussian(0.0, 0.3, -1.0, 1.0, 101);
  CHECK_THROWS_AS(translate(psi, -0.5, DeformationParam::from_gamma(2.0)), pdm::PoleError);
}

TEST_CASE("L2 norm of the translated state is exactly 1/(1+gamma eps)") {
  const double sigma = 0.4;
  const auto psi = SampledWavefunction::sample(
      [&](double x) { return Complex(std::sqrt(gaussian(x, 0.0, sigma))); },
      uniform_grid(-4.0, 4.0, 2001));
  const double n0 = psi.integrate_density();
  for (double gamma : {0.2, -0.2}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    for (double eps : {0.01, 0.1}) {
      const double n = translate(psi, eps, dp).integrate_density() / n0;
      CHECK(std::abs(n - 1.0 / (1.0 + gamma * eps)) < 1e-12);
    }
  }
}

TEST_CASE("integrated modulus of the translated gaussian is 1 + c eps^2") {
  // With a momentum-like phase the modulus picks up rho(eps g) = 1 + O(eps^2);
  // there is no first-order term.
  struct Case {
    double gamma, center, sigma, lo, hi;
  };
  PhaseFunction g = [](double x) { return 1.0 + 0.5 * x; };
  for (const Case c : {Case{0.1, 0.0, 0.5, -4.0, 4.0}, Case{-0.1, 0.0, 0.5, -4.0, 4.0},
                       Case{2.0, 1.0, 0.2, -0.45, 2.45}}) {
    const auto dp = DeformationParam::from_gamma(c.gamma);
    const auto psi = sampled_gaussian(c.center, c.sigma, c.lo, c.hi, 4001);
    const double base = trapezoid_abs(psi);
    auto excess = [&](double eps) { return trapezoid_abs(translate(psi, eps, dp, g)) / base - 1.0; };
    const double h = 0.02;
    const double e1 = excess(h), e2 = excess(h / 2), e3 = excess(h / 4);
    // rho < 1 for q > 1, so the correction carries the sign of gamma.
    CHECK((e1 > 0.0) == (c.gamma > 0.0));
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.01));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.01));
    // No odd part: the integral depends on eps only through eps^2.
    CHECK(std::abs(excess(-h) - e1) < 1e-12);
    // Quadratic fit in s = eps^2 through the three points; the constant vanishes.
    const double s1 = h * h, s2 = s1 / 4, s3 = s1 / 16;
    const double d1 = (e1 - e2) / (s1 - s2), d2 = (e2 - e3) / (s2 - s3);
    const double d12 = (d1 - d2) / (s1 - s3);
    const double a = e3 - d2 * s3 + d12 * s3 * s2;
    CAPTURE(c.gamma);
    CHECK(std::abs(a) < 1e-6 * std::abs(e3));
  }
}

TEST_CASE("position expectation under translation") {
  const auto dp0 = DeformationParam::undeformed();
  const auto off = sampled_gaussian(0.4, 0.3, -3.0, 3.5, 1501);
  const double mean0 = off.integrate_density([](double x) { return x; }) / off.integrate_density();
  CHECK(std::abs(translated_position_mean(off, 0.25, dp0) - (mean0 + 0.25)) < 1e-12);

  for (double gamma : {0.2, -0.2}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    const double eps = 0.1;
    CHECK(std::abs(translated_position_mean(off, eps, dp) - (mean0 * (1 + gamma * eps) + eps)) < 1e-12);

    // Centered state with a position-dependent phase: deviation from eps is O(eps^2).
    const auto centered = sampled_gaussian(0.0, 0.3, -3.0, 3.0, 1501);
    PhaseFunction g = [](double x) { return 1.0 + x; };
    auto residual = [&](double e) { return std::abs(translated_position_mean(centered, e, dp, g) - e); };
    const double r1 = residual(1e-2), r2 = residual(5e-3);
    CHECK(r1 < 1e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("p_q reference actions") {
  const auto dp0 = DeformationParam::undeformed();
  const auto f = AnalyticTestFunction::gaussian_bump(0.1, 0.4, 1, 1.5);
  for (double x : {-0.5, 0.0, 0.3}) {
    CHECK(std::abs(apply_p_q(f, x, dp0) - (-kI) * f.d1(x)) < 1e-15);
  }
  const auto one = constant_one();
  for (double gamma : {0.5, 2.0, -0.3}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    CHECK(std::abs(apply_p_q(one, 0.2, dp) - (-kI * gamma / 2.0)) < 1e-15);
  }
}

TEST_CASE("p_q and its symmetrized form agree") {
  for (double gamma : {0.3, 2.0, -0.5}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    for (int power : {0, 1, 2}) {
      const auto f = AnalyticTestFunction::gaussian_bump(0.2, 0.3, power, 2.0);
      for (double x : {-0.4, 0.1, 0.35, 0.9}) {
        if (1.0 + gamma * x <= 0.0) continue;
        CHECK(rel_diff(apply_p_q(f, x, dp), apply_p_q_symmetric(f, x, dp)) < 1e-12);
      }
    }
  }
}

TEST_CASE("free eigenfunctions are eigenvectors of p_q^2") {
  for (double gamma : {0.4, 2.0}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    for (int sign : {+1, -1}) {
      const double k = 3.7;
      const auto f = pdm::well::free_eigenfunction_function(dp, k, sign);
      for (double x : {0.0, 0.3, 1.2}) {
        const Complex lhs = apply_p_q_squared(f, x, dp) / 2.0;
        const Complex rhs = 0.5 * k * k * f.value(x);
        CHECK(std::abs(lhs - rhs) < 1e-12 * std::abs(rhs) + 1e-14);
        // First-order: p_q phi = +- hbar k phi.
        CHECK(std::abs(apply_p_q(f, x, dp) - double(sign) * k * f.value(x)) < 1e-12);
      }
    }
  }
}

TEST_CASE("x_q is a bijection onto the reals") {
  const auto dp1 = DeformationParam::from_gamma(1.0);
  CHECK(x_q_of_x(0.0, dp1) == 0.0);
  CHECK(x_q_of_x(kE - 1.0, dp1) == doctest::Approx(1.0).epsilon(1e-15));
  for (double gamma : {0.5, 3.0}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    double prev = -INFINITY;
    for (int i = 1; i < 2000; ++i) {
      const double x = -1.0 / gamma + i * (10.0 + 1.0 / gamma) / 2000.0;
      const double y = x_q_of_x(x, dp);
      CHECK(y > prev);
      prev = y;
      CHECK(std::abs(x_of_x_q(y, dp) - x) < 1e-12 * std::max(1.0, std::abs(x)));
    }
    CHECK_THROWS_AS(x_q_of_x(-1.0 / gamma, dp), pdm::SingularityError);
  }
  // Small gamma: x_q = x - gamma x^2/2 + ...
  for (double gamma : {1e-3, 1e-5}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    const double x = 0.7;
    CHECK(std::abs(x_q_of_x(x, dp) - x) <= gamma * x * x);
    CHECK(std::abs(x_q_of_x(x, dp) - (x - gamma * x * x / 2)) <= gamma * gamma * x * x * x);
  }
}

TEST_CASE("hermiticity of p_q and the non-Hermitian negative control") {
  const auto f = AnalyticTestFunction::gaussian_bump(0.3, 0.12, 1, 4.0);
  const auto h = AnalyticTestFunction::gaussian_bump(0.35, 0.12, 0, 4.0);
  CHECK(hermiticity_residual(f, h, DeformationParam::undeformed(), -1.0, 2.0) < 1e-10);
  for (double gamma : {2.0, 0.5, -0.5}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    CAPTURE(gamma);
    CHECK(hermiticity_residual(f, h, dp, -0.4, 1.5) < 1e-10);
    const double control = hermiticity_residual(f, h, dp, -0.4, 1.5, 1.0, 0.0);
    const double expected = std::abs(gamma) * std::abs(inner_product(h, f, -0.4, 1.5));
    CHECK(control > 1e-3);
    CHECK(rel_diff(control, expected) < 1e-8);
  }
}

TEST_CASE("commutator identities hold pointwise on the test family") {
  const CommutatorKind kinds[] = {CommutatorKind::xp, CommutatorKind::xqpq, CommutatorKind::x_pq2,
                                  CommutatorKind::p_pq2};
  for (double gamma : {0.0, 0.5, 2.0, -0.6}) {
    const auto dp = DeformationParam::from_gamma(gamma);
    for (int power : {0, 1, 2}) {
      for (double k : {0.0, 3.0}) {
        const auto f = AnalyticTestFunction::gaussian_bump(0.25, 0.3, power, k);
        for (auto kind : kinds) {
          for (double x : {-0.5, -0.1, 0.25, 0.6, 1.0}) {
            if (1.0 + gamma * x <= 0.0) continue;
            CAPTURE(gamma);
            CAPTURE(power);
            CAPTURE(x);
            CHECK(commutator_check(kind, f, x, dp) < 1e-9);
          }
        }
      }
    }
  }
}

TEST_CASE("commutators raise at the singular point") {
  const auto dp = DeformationParam::from_gamma(2.0);
  const auto f = AnalyticTestFunction::gaussian_bump(0.0, 0.3, 0);
  CHECK_THROWS_AS(commutator_check(CommutatorKind::xqpq, f, -0.5, dp), pdm::SingularityError);
}
