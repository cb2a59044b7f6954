#include "nilflow/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

namespace nilflow {

double AsymptoticProfile::value(int comp, double t) const {
  return gamma[comp] * std::pow(t, exponents[comp]);
}

AsymptoticProfile predict(int n, const Eigen::VectorXd& g0diag) {
  if (n < 1) throw std::domain_error("predict: n must be >= 1");
  if (g0diag.size() != 2 * n + 1)
    throw std::invalid_argument("predict: initial metric has wrong length");
  if (!(g0diag.array() > 0.0).all())
    throw std::invalid_argument("predict: initial metric must be positive");

  AsymptoticProfile p;
  p.n = n;
  p.A.resize(n);
  p.B.resize(n);
  p.gamma.resize(2 * n + 1);
  p.exponents.resize(2 * n + 1);

  const double gN = g0diag[2 * n];
  double prod = gN * gN;
  for (int i = 0; i < 2 * n; ++i) prod *= g0diag[i];
  p.C = prod;

  const double m = n + 2.0;
  const double croot = std::pow(p.C, 1.0 / (2.0 * m));
  const double front = std::pow(m, 1.0 / m);
  for (int i = 0; i < n; ++i) {
    p.A[i] = g0diag[i] / g0diag[i + n];
    p.B[i] = g0diag[i + n] / g0diag[i];
    p.gamma[i] = front * std::sqrt(p.A[i]) * croot;
    p.gamma[i + n] = front * std::sqrt(p.B[i]) * croot;
    p.exponents[i] = 1.0 / m;
    p.exponents[i + n] = 1.0 / m;
  }
  p.gamma[2 * n] = std::pow(m, -n / m) * std::pow(p.C, 1.0 / m);
  p.exponents[2 * n] = -n / m;
  return p;
}

RatioReport ratio_convergence(const FlowTrajectory& traj, const AsymptoticProfile& profile,
                              double t_lo, double t_hi) {
  if (traj.heisenberg_n != profile.n || traj.heisenberg_n <= 0)
    throw std::invalid_argument(
        "ratio_convergence: needs a diagonal Heisenberg trajectory matching the profile");
  if (!(t_lo > 0.0) || !(t_hi > t_lo))
    throw std::invalid_argument("ratio_convergence: need 0 < t_lo < t_hi");

  const int d = 2 * profile.n + 1;
  RatioReport rep;
  rep.sup_dev = Eigen::VectorXd::Zero(d);
  rep.start_dev = Eigen::VectorXd::Zero(d);
  rep.end_dev = Eigen::VectorXd::Zero(d);
  bool any = false;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    const double t = traj.times[s];
    if (t < t_lo || t > t_hi) continue;
    const Eigen::VectorXd& g = traj.states[s].diag();
    Eigen::VectorXd dev(d);
    for (int c = 0; c < d; ++c) dev[c] = std::abs(g[c] / profile.value(c, t) - 1.0);
    if (!any) {
      rep.start_dev = dev;
      rep.t_start = t;
      any = true;
    }
    rep.end_dev = dev;
    rep.t_end = t;
    rep.sup_dev = rep.sup_dev.cwiseMax(dev);
  }
  if (!any)
    throw std::invalid_argument("ratio_convergence: no trajectory samples in the window");
  rep.max_sup = rep.sup_dev.maxCoeff();
  rep.max_start = rep.start_dev.maxCoeff();
  rep.max_end = rep.end_dev.maxCoeff();
  return rep;
}

double comparison_lemma_check(double c, const std::function<double(double)>& eps,
                              double t_end, double rtol, double atol) {
  if (!(t_end > 0.0)) throw std::invalid_argument("comparison_lemma_check: need t_end > 0");
  Eigen::VectorXd y0(2);
  y0 << 1.0, 1.0;
  ode::Options opt;
  opt.rtol = rtol;
  opt.atol = atol;
  const double tf = t_end;
  auto f = [c, &eps](double t, const Eigen::VectorXd&) {
    Eigen::VectorXd dy(2);
    dy[0] = c;
    dy[1] = c * (1.0 + eps(t));
    return dy;
  };
  ode::Samples out = ode::integrate_dopri5(f, y0, 0.0, tf, std::span<const double>(&tf, 1), opt);
  const Eigen::VectorXd& yf = out.y.back();
  return yf[0] / yf[1];
}

}  // namespace nilflow
