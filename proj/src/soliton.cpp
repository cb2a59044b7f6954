#include "nilflow/soliton.hpp"

#include "nilflow/curvature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace nilflow {

Eigen::VectorXd ScalingDiffeo::alpha(double s) const {
  if (!(s > 0.0)) throw std::domain_error("ScalingDiffeo: scale parameter must be > 0");
  Eigen::VectorXd a(coef.size());
  for (int i = 0; i < coef.size(); ++i) a[i] = coef[i] * std::pow(s, expo[i]);
  return a;
}

double ScalingDiffeo::automorphism_residual(const LieAlgebraSpec& spec) const {
  if (coef.size() != spec.dim() || expo.size() != spec.dim())
    throw std::invalid_argument("automorphism_residual: size mismatch");
  double r = 0.0;
  for (const auto& e : spec.entries()) {
    r = std::max(r, std::abs(coef[e.i] * coef[e.j] - coef[e.k]));
    r = std::max(r, std::abs(expo[e.i] + expo[e.j] - expo[e.k]));
  }
  return r;
}

ScalingDiffeo ScalingDiffeo::eta_heisenberg(int n) {
  if (n < 1) throw std::domain_error("eta_heisenberg: n must be >= 1");
  const int d = 2 * n + 1;
  ScalingDiffeo sd;
  sd.coef = Eigen::VectorXd::Ones(d);
  sd.expo.resize(d);
  const double a = -(n + 1.0) / (2.0 * (n + 2.0));
  for (int i = 0; i < 2 * n; ++i) sd.expo[i] = a;
  sd.expo[2 * n] = 2.0 * a;
  return sd;
}

ScalingDiffeo ScalingDiffeo::eta_unitriangular(int n) {
  IndexMap m = IndexMap::unitriangular(n);
  ScalingDiffeo sd;
  sd.coef = Eigen::VectorXd::Ones(m.size());
  sd.expo.resize(m.size());
  for (int a = 0; a < m.size(); ++a) {
    auto [i, j] = m.pair_of(a);
    sd.expo[a] = -static_cast<double>(j - i) / n;
  }
  return sd;
}

ScalingDiffeo ScalingDiffeo::phi_heisenberg(const AsymptoticProfile& profile) {
  const int n = profile.n;
  const int d = 2 * n + 1;
  ScalingDiffeo sd;
  sd.coef.resize(d);
  sd.expo.resize(d);
  const double m = n + 2.0;
  const double front = std::pow(m, -1.0 / (2.0 * m));
  const double croot = std::pow(profile.C, -1.0 / (4.0 * m));
  const double e = (n + 1.0) / (2.0 * m);
  for (int i = 0; i < n; ++i) {
    sd.coef[i] = front * std::pow(profile.A[i], -0.25) * croot;
    sd.coef[i + n] = front * std::pow(profile.B[i], -0.25) * croot;
    sd.expo[i] = e;
    sd.expo[i + n] = e;
  }
  sd.coef[2 * n] = sd.coef[0] * sd.coef[n];
  sd.expo[2 * n] = 2.0 * e;
  return sd;
}

MetricState pullback(const MetricState& g, const ScalingDiffeo& d, double s) {
  Eigen::VectorXd a = d.alpha(s);
  if (a.size() != g.dim()) throw std::invalid_argument("pullback: size mismatch");
  if (g.is_diagonal())
    return MetricState::diagonal(g.diag().cwiseProduct(a.cwiseProduct(a)));
  Eigen::MatrixXd m = g.matrix();
  for (int i = 0; i < g.dim(); ++i)
    for (int j = 0; j < g.dim(); ++j) m(i, j) *= a[i] * a[j];
  return MetricState::full(std::move(m));
}

MetricState soliton_heisenberg(int n, double t) {
  if (n < 1 || !(t > 0.0)) throw std::domain_error("soliton_heisenberg: need n >= 1, t > 0");
  const double m = n + 2.0;
  Eigen::VectorXd g(2 * n + 1);
  const double x = std::pow(t, 1.0 / m);
  for (int i = 0; i < 2 * n; ++i) g[i] = x;
  g[2 * n] = std::pow(t, -n / m) / m;
  return MetricState::diagonal(std::move(g));
}

Eigen::VectorXd soliton_heisenberg_ddt(int n, double t) {
  if (n < 1 || !(t > 0.0))
    throw std::domain_error("soliton_heisenberg_ddt: need n >= 1, t > 0");
  const double m = n + 2.0;
  Eigen::VectorXd dg(2 * n + 1);
  const double dx = (1.0 / m) * std::pow(t, 1.0 / m - 1.0);
  for (int i = 0; i < 2 * n; ++i) dg[i] = dx;
  dg[2 * n] = (-n / m) * std::pow(t, -n / m - 1.0) / m;
  return dg;
}

MetricState soliton_unitriangular(int n, double t, double A) {
  if (n < 2 || !(t > 0.0) || !(A > 0.0))
    throw std::domain_error("soliton_unitriangular: need n >= 2, t > 0, A > 0");
  IndexMap im = IndexMap::unitriangular(n);
  Eigen::VectorXd g(im.size());
  for (int a = 0; a < im.size(); ++a) {
    auto [i, j] = im.pair_of(a);
    const int d = j - i;
    g[a] = std::pow(A, d) * std::pow(double(n), -(d - 1.0)) *
           std::pow(t, 1.0 - 2.0 * d / n);
  }
  return MetricState::diagonal(std::move(g));
}

Eigen::VectorXd soliton_unitriangular_ddt(int n, double t, double A) {
  if (n < 2 || !(t > 0.0) || !(A > 0.0))
    throw std::domain_error("soliton_unitriangular_ddt: need n >= 2, t > 0, A > 0");
  IndexMap im = IndexMap::unitriangular(n);
  Eigen::VectorXd dg(im.size());
  for (int a = 0; a < im.size(); ++a) {
    auto [i, j] = im.pair_of(a);
    const int d = j - i;
    dg[a] = (1.0 - 2.0 * d / n) * std::pow(A, d) * std::pow(double(n), -(d - 1.0)) *
            std::pow(t, -2.0 * d / n);
  }
  return dg;
}

MetricState blowdown_at(const AsymptoticProfile& profile, double t, double s) {
  if (!(t > 0.0) || !(s > 0.0)) throw std::domain_error("blowdown_at: need t > 0, s > 0");
  ScalingDiffeo phi = ScalingDiffeo::phi_heisenberg(profile);
  Eigen::VectorXd a = phi.alpha(s);
  const int d = 2 * profile.n + 1;
  Eigen::VectorXd g(d);
  for (int c = 0; c < d; ++c) g[c] = profile.value(c, s * t) * a[c] * a[c] / s;
  return MetricState::diagonal(std::move(g));
}

MetricState blowdown_limit(const AsymptoticProfile& profile, double t) {
  const double scales[] = {1.0, 10.0, 1e3, 1e6};
  std::vector<Eigen::VectorXd> gs;
  for (double s : scales) gs.push_back(blowdown_at(profile, t, s).diag());
  for (size_t a = 1; a < gs.size(); ++a) {
    double dev = ((gs[a] - gs[0]).cwiseQuotient(gs[0])).cwiseAbs().maxCoeff();
    if (dev > 1e-12)
      throw std::runtime_error("blowdown_limit: rescalings disagree beyond 1e-12");
  }
  return MetricState::diagonal(gs[0]);
}

SolitonCertificate lauret_certify(const LieAlgebraSpec& spec, const MetricState& g) {
  const int n = spec.dim();
  const int nn = n * n;
  const Eigen::MatrixXd E = g.inverse_matrix() * ricci_general(spec, g);

  // Derivation constraints, one row per (basis pair p < q, output component l):
  //   sum_m c_{pq}^m D(l,m) - sum_r c_{rq}^l D(r,p) - sum_r c_{pr}^l D(r,q) = 0
  // assembled directly into the normal matrix N = M^T M. Columns index vec(D)
  // column-major: D(r,c) -> c*n + r.
  Eigen::MatrixXd N = Eigen::MatrixXd::Zero(nn, nn);
  std::vector<std::pair<int, double>> row;
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q)
      for (int l = 0; l < n; ++l) {
        row.clear();
        for (const auto& e : spec.entries())
          if (e.i == p && e.j == q) row.emplace_back(e.k * n + l, e.c);
        for (const auto& e : spec.completed()) {
          if (e.j == q && e.k == l) row.emplace_back(p * n + e.i, -e.c);
          if (e.i == p && e.k == l) row.emplace_back(q * n + e.j, -e.c);
        }
        for (const auto& [c1, v1] : row)
          for (const auto& [c2, v2] : row) N(c1, c2) += v1 * v2;
      }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(N);
  const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
  const double tau = 1e-9 * std::max(1.0, ev[nn - 1]);
  int k = 0;
  while (k < nn && ev[k] <= tau) ++k;
  const Eigen::MatrixXd B = es.eigenvectors().leftCols(k);

  Eigen::MatrixXd A(nn, k + 1);
  Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  A.col(0) = Eigen::Map<const Eigen::VectorXd>(I.data(), nn);
  A.rightCols(k) = B;
  const Eigen::VectorXd vecE = Eigen::Map<const Eigen::VectorXd>(E.data(), nn);
  Eigen::VectorXd x =
      A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(vecE);

  SolitonCertificate cert;
  cert.c = x[0];
  Eigen::VectorXd vecD = B * x.tail(k);
  cert.D = Eigen::Map<const Eigen::MatrixXd>(vecD.data(), n, n);
  cert.ricci_residual = (E - cert.c * I - cert.D).cwiseAbs().maxCoeff();
  cert.derivation_residual = is_derivation(spec, cert.D);
  return cert;
}

}  // namespace nilflow
