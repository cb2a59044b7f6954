#pragma once

#include "nilflow/algebra.hpp"
#include "nilflow/metric.hpp"
#include "nilflow/ode.hpp"

#include <array>
#include <limits>
#include <vector>

namespace nilflow {

/// Right-hand side selection for dg/dt = -2 Ric(g). The diagonal fast paths
/// require an exactly matching generated family and a diagonal initial metric;
/// `automatic` picks the fastest applicable one.
enum class RhsMode { automatic, general, heisenberg_diag, unitriangular_diag };

struct FlowProblem {
  LieAlgebraSpec algebra;
  MetricState g0;
  double t0 = 0.0;
  double t1 = 1.0;
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  RhsMode mode = RhsMode::automatic;
  int samples = 100;
  bool log_spaced = false;
  /// Overrides samples/log_spaced when non-empty; must be sorted in [t0, t1].
  std::vector<double> sample_times;
};

/// Quantities constant along the diagonal Heisenberg flow:
/// A_i = g_i/g_{i+n}, B_{i+n} = g_{i+n}/g_i, C1 = g_1...g_n g_N,
/// C2 = g_{1+n}...g_{2n} g_N, C = C1 C2.
struct ConservedSet {
  Eigen::VectorXd A;  // size n
  Eigen::VectorXd B;  // size n
  double C1 = 0.0;
  double C2 = 0.0;
  double C = 0.0;
  static ConservedSet heisenberg(int n, const Eigen::VectorXd& gdiag);
};

struct FlowTrajectory {
  std::vector<double> times;
  std::vector<MetricState> states;
  /// Filled in heisenberg_diag mode, one entry per sample.
  std::vector<ConservedSet> conserved;
  ode::Stats stats;
  RhsMode mode_used = RhsMode::general;
  int heisenberg_n = 0;  // > 0 when conserved is tracked
};

Eigen::VectorXd rhs_heisenberg_diag(int n, const Eigen::VectorXd& g);
Eigen::VectorXd rhs_unitriangular_diag(int n, const Eigen::VectorXd& g);
/// -2 Ric on the lower-triangle vectorization; all-NaN when the state is not
/// positive definite (the integrator treats that as a failed step).
Eigen::VectorXd rhs_general_lower(const LieAlgebraSpec& spec, const Eigen::VectorXd& lower);

/// Resolve `automatic` and check that an explicitly requested fast path
/// actually applies (throws std::invalid_argument otherwise).
RhsMode resolve_mode(const FlowProblem& pb);

/// Integrate dg/dt = -2 Ric(g). Positivity is enforced by step rejection; a
/// state that cannot be kept positive definite raises ode::Breakdown with the
/// last valid time.
FlowTrajectory integrate(const FlowProblem& pb);

/// Exact solution on heisenberg(1) from diagonal (A0, B0, C0):
/// A(t) = A0 K^{-1/3} (t+K)^{1/3}, B likewise with B0,
/// C(t) = C0 K^{1/3} (t+K)^{-1/3}, K = A0 B0 / (3 C0).
std::array<double, 3> nil3_closed_form(double A0, double B0, double C0, double t);

/// Sigma = sum_k 1/(g_k g_{k+n}) for a diagonal Heisenberg metric.
double sigma_heisenberg(int n, const Eigen::VectorXd& gdiag);

struct DriftReport {
  Eigen::VectorXd drift_A;  // max_t |A_i(t)/A_i(t0) - 1|
  Eigen::VectorXd drift_B;
  double drift_C1 = 0.0;
  double drift_C2 = 0.0;
  double max_drift = 0.0;
};

/// Relative drift of the conserved set along a heisenberg_diag trajectory;
/// throws std::invalid_argument if the trajectory carries no conserved ledger.
/// Only samples with t <= t_hi are considered (default: all).
DriftReport conserved_drift(const FlowTrajectory& traj,
                            double t_hi = std::numeric_limits<double>::infinity());

}  // namespace nilflow
