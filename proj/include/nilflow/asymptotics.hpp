#pragma once

#include "nilflow/flow.hpp"

#include <functional>

namespace nilflow {

/// Power-law profile g_I(t) ~ gamma_I t^{e_I} for the diagonal Heisenberg
/// flow, built from the initial metric alone:
///   gamma_i   = (n+2)^{1/(n+2)} sqrt(A_i) C^{1/(2(n+2))},  e_i = 1/(n+2)
///   gamma_{i+n} likewise with B_{i+n},
///   gamma_N   = (n+2)^{-n/(n+2)} C^{1/(n+2)},              e_N = -n/(n+2)
/// with C = g_1(0)...g_{2n}(0) g_N(0)^2.
struct AsymptoticProfile {
  int n = 0;
  Eigen::VectorXd gamma;      // size 2n+1
  Eigen::VectorXd exponents;  // size 2n+1
  Eigen::VectorXd A;          // conserved ratios, size n
  Eigen::VectorXd B;          // size n
  double C = 0.0;
  double value(int comp, double t) const;
};

AsymptoticProfile predict(int n, const Eigen::VectorXd& g0diag);

struct RatioReport {
  Eigen::VectorXd sup_dev;    // per component, over the window
  Eigen::VectorXd start_dev;  // at the first sample in the window
  Eigen::VectorXd end_dev;    // at the last sample in the window
  double max_sup = 0.0;
  double max_start = 0.0;
  double max_end = 0.0;
  double t_start = 0.0;
  double t_end = 0.0;
};

/// Deviations |g_I(t) / (gamma_I t^{e_I}) - 1| over trajectory samples with
/// t in [t_lo, t_hi]. Requires a diagonal Heisenberg trajectory with at least
/// one sample inside the window.
RatioReport ratio_convergence(const FlowTrajectory& traj, const AsymptoticProfile& profile,
                              double t_lo, double t_hi);

/// Harness for the two-ODE comparison argument: integrates u' = c and
/// v' = c (1 + eps(t)) from u(0) = v(0) = 1 and returns u/v at t_end.
/// With integrable eps the ratio tends to 1.
double comparison_lemma_check(double c, const std::function<double(double)>& eps,
                              double t_end, double rtol = 1e-12, double atol = 1e-14);

}  // namespace nilflow
