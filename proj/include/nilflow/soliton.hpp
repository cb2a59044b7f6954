#pragma once

#include "nilflow/asymptotics.hpp"

namespace nilflow {

/// One-parameter family of basis scalings: the pullback multiplies the coframe
/// component theta^I by alpha_I(s) = coef_I * s^{expo_I}, hence a diagonal
/// metric component g_I by alpha_I(s)^2. The family consists of automorphisms
/// iff coef and expo are additive over every bracket c_{PQ}^R != 0.
struct ScalingDiffeo {
  Eigen::VectorXd coef;
  Eigen::VectorXd expo;

  Eigen::VectorXd alpha(double s) const;
  /// Max over brackets of max(|coef_P coef_Q - coef_R|, |expo_P + expo_Q - expo_R|).
  double automorphism_residual(const LieAlgebraSpec& spec) const;

  /// eta_t on heisenberg(n): exponent a = -(n+1)/(2(n+2)) on the first 2n
  /// components, 2a on the center.
  static ScalingDiffeo eta_heisenberg(int n);
  /// eta_t on unitriangular(n): exponent -(j-i)/n on component (i,j).
  static ScalingDiffeo eta_unitriangular(int n);
  /// phi_s normalizing the blowdown of the profile:
  /// alpha^i(s) = (n+2)^{-1/(2(n+2))} A_i^{-1/4} C^{-1/(4(n+2))} s^{(n+1)/(2(n+2))},
  /// alpha^{i+n} likewise with B, alpha^N = alpha^i alpha^{i+n}.
  static ScalingDiffeo phi_heisenberg(const AsymptoticProfile& profile);
};

/// Pullback of a diagonal metric by the scaling at parameter s > 0.
MetricState pullback(const MetricState& g, const ScalingDiffeo& d, double s);

/// Soliton metric on heisenberg(n): diag(t^{1/(n+2)} x 2n, t^{-n/(n+2)}/(n+2)).
MetricState soliton_heisenberg(int n, double t);
Eigen::VectorXd soliton_heisenberg_ddt(int n, double t);

/// Soliton metric on unitriangular(n), flat (j-i, i) order:
/// g_ij(t) = A^{j-i} n^{-(j-i-1)} t^{1 - 2(j-i)/n}.
MetricState soliton_unitriangular(int n, double t, double A = 1.0);
Eigen::VectorXd soliton_unitriangular_ddt(int n, double t, double A = 1.0);

/// (1/s) phi_s^* g_asym(s t) for the profile's power-law metric; exactly
/// independent of s by construction.
MetricState blowdown_at(const AsymptoticProfile& profile, double t, double s);

/// blowdown_at over s in {1, 10, 1e3, 1e6}; verifies mutual agreement to
/// 1e-12 (throws std::runtime_error otherwise) and returns the limit metric.
MetricState blowdown_limit(const AsymptoticProfile& profile, double t);

/// Witness for Ric_endo = c Id + D with D a derivation: residuals are exact
/// measures of how far the best constrained least-squares solution is from an
/// equality. A metric is a soliton metric iff both residuals vanish.
struct SolitonCertificate {
  double c = 0.0;
  Eigen::MatrixXd D;
  double ricci_residual = 0.0;       // |Ric_endo - c I - D|_max
  double derivation_residual = 0.0;  // is_derivation(spec, D)
  bool valid(double tol = 1e-10) const {
    return ricci_residual <= tol && derivation_residual <= tol;
  }
};

/// Equality-constrained least squares (null-space method): minimizes
/// |c I + D - g^{-1} Ric|_F over scalars c and derivations D.
SolitonCertificate lauret_certify(const LieAlgebraSpec& spec, const MetricState& g);

}  // namespace nilflow
