#include "nilflow/flow.hpp"

#include "nilflow/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace nilflow {

Eigen::VectorXd rhs_heisenberg_diag(int n, const Eigen::VectorXd& g) {
  const double gN = g[2 * n];
  Eigen::VectorXd dg(2 * n + 1);
  double sigma = 0.0;
  for (int i = 0; i < n; ++i) {
    dg[i] = gN / g[i + n];
    dg[i + n] = gN / g[i];
    sigma += 1.0 / (g[i] * g[i + n]);
  }
  dg[2 * n] = -gN * gN * sigma;
  return dg;
}

Eigen::VectorXd rhs_unitriangular_diag(int n, const Eigen::VectorXd& g) {
  return -2.0 * ricci_unitriangular_diag(n, g);
}

Eigen::VectorXd rhs_general_lower(const LieAlgebraSpec& spec, const Eigen::VectorXd& lower) {
  const int n = spec.dim();
  if (!MetricState::lower_is_positive_definite(n, lower))
    return Eigen::VectorXd::Constant(lower.size(),
                                     std::numeric_limits<double>::quiet_NaN());
  MetricState g = MetricState::full(MetricState::lower_to_sym(n, lower));
  Eigen::MatrixXd ric = ricci_general(spec, g);
  Eigen::VectorXd out(lower.size());
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) out[a++] = -2.0 * ric(i, j);
  return out;
}

ConservedSet ConservedSet::heisenberg(int n, const Eigen::VectorXd& gdiag) {
  ConservedSet cs;
  cs.A.resize(n);
  cs.B.resize(n);
  const double gN = gdiag[2 * n];
  double p1 = 1.0, p2 = 1.0;
  for (int i = 0; i < n; ++i) {
    cs.A[i] = gdiag[i] / gdiag[i + n];
    cs.B[i] = gdiag[i + n] / gdiag[i];
    p1 *= gdiag[i];
    p2 *= gdiag[i + n];
  }
  cs.C1 = p1 * gN;
  cs.C2 = p2 * gN;
  cs.C = cs.C1 * cs.C2;
  return cs;
}

RhsMode resolve_mode(const FlowProblem& pb) {
  FamilyInfo fam = detect_family(pb.algebra);
  const bool diag = pb.g0.is_diagonal();
  const bool heis_ok = diag && fam.family == Family::heisenberg;
  // unitriangular(3) matches heisenberg(1) entry for entry, so accept it here
  const bool ut_ok = diag && (fam.family == Family::unitriangular ||
                              (fam.family == Family::heisenberg && fam.n == 1));
  switch (pb.mode) {
    case RhsMode::general:
      return RhsMode::general;
    case RhsMode::heisenberg_diag:
      if (!heis_ok)
        throw std::invalid_argument(
            "flow: heisenberg_diag mode needs the generated Heisenberg basis "
            "and a diagonal initial metric");
      return RhsMode::heisenberg_diag;
    case RhsMode::unitriangular_diag:
      if (!ut_ok)
        throw std::invalid_argument(
            "flow: unitriangular_diag mode needs the generated upper-triangular "
            "basis and a diagonal initial metric");
      return RhsMode::unitriangular_diag;
    case RhsMode::automatic:
      if (heis_ok) return RhsMode::heisenberg_diag;
      if (ut_ok) return RhsMode::unitriangular_diag;
      return RhsMode::general;
  }
  throw std::logic_error("flow: unreachable mode");
}

namespace {

std::vector<double> build_sample_times(const FlowProblem& pb) {
  if (!pb.sample_times.empty()) return pb.sample_times;
  if (pb.samples < 2) throw std::invalid_argument("flow: need at least 2 samples");
  std::vector<double> ts(pb.samples);
  if (pb.log_spaced) {
    if (pb.t0 <= 0.0)
      throw std::invalid_argument("flow: log-spaced samples need t0 > 0");
    double l0 = std::log(pb.t0), l1 = std::log(pb.t1);
    for (int i = 0; i < pb.samples; ++i)
      ts[i] = std::exp(l0 + (l1 - l0) * i / (pb.samples - 1));
  } else {
    for (int i = 0; i < pb.samples; ++i)
      ts[i] = pb.t0 + (pb.t1 - pb.t0) * i / (pb.samples - 1);
  }
  ts.front() = pb.t0;
  ts.back() = pb.t1;
  return ts;
}

}  // namespace

FlowTrajectory integrate(const FlowProblem& pb) {
  if (pb.algebra.dim() != pb.g0.dim())
    throw std::invalid_argument("flow: algebra and metric dimensions differ");
  if (!(pb.t1 > pb.t0)) throw std::invalid_argument("flow: need t1 > t0");

  const RhsMode mode = resolve_mode(pb);
  FamilyInfo fam = detect_family(pb.algebra);
  const std::vector<double> ts = build_sample_times(pb);

  ode::Options opt;
  opt.rtol = pb.rtol;
  opt.atol = pb.atol;
  opt.max_step = pb.max_step;

  ode::Rhs f;
  ode::Validity valid;
  Eigen::VectorXd y0;
  switch (mode) {
    case RhsMode::heisenberg_diag:
      y0 = pb.g0.diag();
      f = [n = fam.n](double, const Eigen::VectorXd& y) {
        return rhs_heisenberg_diag(n, y);
      };
      valid = [](const Eigen::VectorXd& y) {
        return y.allFinite() && (y.array() > 0.0).all();
      };
      break;
    case RhsMode::unitriangular_diag:
      y0 = pb.g0.diag();
      // the heisenberg(1) alias is unitriangular(3)
      f = [n = fam.family == Family::unitriangular ? fam.n : 3](
              double, const Eigen::VectorXd& y) { return rhs_unitriangular_diag(n, y); };
      valid = [](const Eigen::VectorXd& y) {
        return y.allFinite() && (y.array() > 0.0).all();
      };
      break;
    default:
      y0 = pb.g0.lower();
      f = [&pb](double, const Eigen::VectorXd& y) {
        return rhs_general_lower(pb.algebra, y);
      };
      valid = [d = pb.algebra.dim()](const Eigen::VectorXd& y) {
        return MetricState::lower_is_positive_definite(d, y);
      };
      break;
  }

  ode::Samples out = ode::integrate_dopri5(f, y0, pb.t0, pb.t1, ts, opt, valid);

  FlowTrajectory traj;
  traj.times = out.t;
  traj.stats = out.stats;
  traj.mode_used = mode;
  traj.states.reserve(out.y.size());
  const bool diag_state = mode != RhsMode::general;
  for (const auto& y : out.y)
    traj.states.push_back(diag_state ? MetricState::diagonal(y)
                                     : MetricState::from_lower(pb.algebra.dim(), y));
  if (mode == RhsMode::heisenberg_diag) {
    traj.heisenberg_n = fam.n;
    traj.conserved.reserve(out.y.size());
    for (const auto& y : out.y)
      traj.conserved.push_back(ConservedSet::heisenberg(fam.n, y));
  }
  return traj;
}

std::array<double, 3> nil3_closed_form(double A0, double B0, double C0, double t) {
  if (!(A0 > 0.0) || !(B0 > 0.0) || !(C0 > 0.0))
    throw std::domain_error("nil3_closed_form: initial components must be positive");
  const double K = A0 * B0 / (3.0 * C0);
  const double r = std::cbrt((t + K) / K);
  return {A0 * r, B0 * r, C0 / r};
}

double sigma_heisenberg(int n, const Eigen::VectorXd& gdiag) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += 1.0 / (gdiag[i] * gdiag[i + n]);
  return s;
}

DriftReport conserved_drift(const FlowTrajectory& traj, double t_hi) {
  if (traj.conserved.empty() || traj.conserved.size() != traj.times.size())
    throw std::invalid_argument("conserved_drift: trajectory carries no conserved ledger");
  const ConservedSet& base = traj.conserved.front();
  const int n = static_cast<int>(base.A.size());
  DriftReport rep;
  rep.drift_A = Eigen::VectorXd::Zero(n);
  rep.drift_B = Eigen::VectorXd::Zero(n);
  for (size_t s = 0; s < traj.times.size(); ++s) {
    if (traj.times[s] > t_hi) break;
    const ConservedSet& cs = traj.conserved[s];
    for (int i = 0; i < n; ++i) {
      rep.drift_A[i] = std::max(rep.drift_A[i], std::abs(cs.A[i] / base.A[i] - 1.0));
      rep.drift_B[i] = std::max(rep.drift_B[i], std::abs(cs.B[i] / base.B[i] - 1.0));
    }
    rep.drift_C1 = std::max(rep.drift_C1, std::abs(cs.C1 / base.C1 - 1.0));
    rep.drift_C2 = std::max(rep.drift_C2, std::abs(cs.C2 / base.C2 - 1.0));
  }
  rep.max_drift = std::max({rep.drift_A.maxCoeff(), rep.drift_B.maxCoeff(),
                            rep.drift_C1, rep.drift_C2});
  return rep;
}

}  // namespace nilflow
