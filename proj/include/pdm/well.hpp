#pragma once

// Closed-form physics of the position-dependent-mass particle, m(x) =
// m/(1+gamma x)^2, confined to the infinite square well [0, L].

#include <array>
#include <complex>
#include <vector>

#include "pdm/qcalc.hpp"
#include "pdm/qops.hpp"
#include "pdm/quadrature.hpp"

namespace pdm::well {

using qcalc::DeformationParam;

/// Physical configuration of the well. Requires L, m, hbar > 0 and
/// 1 + gamma L > 0 so that x = -1/gamma lies outside [0, L].
class WellSpec {
 public:
  WellSpec(double L, double m, double hbar, DeformationParam dp);

  /// L = m = hbar = 1, xi = 1, gamma = gamma_L.
  static WellSpec dimensionless(double gamma_L);

  double L() const noexcept { return L_; }
  double m() const noexcept { return m_; }
  double hbar() const noexcept { return hbar_; }
  const DeformationParam& dp() const noexcept { return dp_; }
  double gamma() const noexcept { return dp_.gamma(); }
  /// The single dimensionless knob gamma * L.
  double gamma_L() const noexcept { return dp_.gamma() * L_; }

  /// ln(1 + gamma L)/gamma, the width of the well in the x_q chart.
  double deformed_length() const;

 private:
  double L_, m_, hbar_;
  DeformationParam dp_;
};

struct EigenResult {
  int n;
  double k_qn;           // inverse length
  double energy;
  double normalization;  // A_{q,n}, length^{-1/2}
};

/// n pi gamma / ln(1 + gamma L). Throws DomainError for n < 1.
double k_qn(const WellSpec& spec, int n);
/// hbar^2 k_qn^2 / 2m.
double energy(const WellSpec& spec, int n);
/// A_{q,n} = sqrt(2 gamma / ln(1 + gamma L)); independent of n.
double normalization(const WellSpec& spec);
EigenResult eigen(const WellSpec& spec, int n);

/// A/sqrt(1 + gamma x) sin(k_qn x_q(x)) on [0, L], zero outside.
double psi_n(const WellSpec& spec, int n, double x);
/// psi_n and its first three derivatives (zero outside [0, L]).
std::array<double, 4> psi_n_derivatives(const WellSpec& spec, int n, double x);
/// psi_n wrapped for the operator layer.
qops::AnalyticTestFunction psi_n_function(const WellSpec& spec, int n);
/// Interior zeros of psi_n, x_j = (exp(j pi / k_qn * gamma) - 1)/gamma.
std::vector<double> node_positions(const WellSpec& spec, int n);

/// (1 + gamma x)^{-1/2} exp(+-i k ln(1 + gamma x)/gamma). sign must be +1 or
/// -1. Throws SingularityError when 1 + gamma x <= 0.
std::complex<double> free_eigenfunction(const DeformationParam& dp, double k, int sign, double x);
std::array<std::complex<double>, 4> free_eigenfunction_derivatives(const DeformationParam& dp,
                                                                   double k, int sign, double x);
qops::AnalyticTestFunction free_eigenfunction_function(const DeformationParam& dp, double k,
                                                       int sign);

struct Moments {
  double x_mean;
  double x2_mean;
  double p_mean;
  double p2_mean;
};

/// Closed-form quantum expectation values of psi_n.
///
/// x2_mean uses the form whose gamma -> 0 limit is L^2/3 - L^2/(2 n^2 pi^2);
/// see x2_mean_as_printed for the variant with (1+gamma L)^2 multiplying
/// only the logarithm. p2_mean evaluates the complex product
/// (k - i gamma/2)(k + i gamma/2) + gamma^2 literally.
Moments quantum_moments(const WellSpec& spec, int n);

/// The <x^2> expression with 1 - (1+gamma L)^2 ln(1+gamma L) in the second
/// numerator. Diverges as gamma -> 0 (NaN at gamma = 0); used for reporting.
double x2_mean_as_printed(const WellSpec& spec, int n);

/// Expectation values by adaptive quadrature with the analytic psi_n',
/// psi_n''. p_mean is |<p>|, which is zero for a real eigenfunction.
Moments quantum_moments_oracle(const WellSpec& spec, int n,
                               const oracle::QuadratureSpec& quad = {});

/// sqrt(Var x Var p)/hbar from the quadrature moments.
double uncertainty_product(const WellSpec& spec, int n);

/// gamma / [(1 + gamma x) ln(1 + gamma L)]. Throws DomainError outside [0, L].
double classical_density(const WellSpec& spec, double x);

/// Time-averaged moments of the free classical particle with energy E > 0.
Moments classical_moments(const WellSpec& spec, double E);

/// 2 gamma / [(1 + gamma x) ln(1 + gamma L)] = A^2/(1 + gamma x), the bound
/// on |psi_n|^2 for every n.
double density_envelope(const WellSpec& spec, double x);

/// |psi_n1(x) psi_n2(y)|^2 in the square box [0, L]^2.
double box2d_density(const WellSpec& spec, int n1, int n2, double x, double y);

}  // namespace pdm::well
