#include "nilflow/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace nilflow {

namespace {

void check_dims(const LieAlgebraSpec& spec, const MetricState& g, const char* who) {
  if (spec.dim() != g.dim())
    throw std::invalid_argument(std::string(who) + ": algebra and metric dimensions differ");
}

}  // namespace

Tensor3 adjoint_constants(const LieAlgebraSpec& spec, const MetricState& g) {
  check_dims(spec, g, "adjoint_constants");
  const int n = spec.dim();
  const Eigen::MatrixXd G = g.matrix();
  const Eigen::MatrixXd Gi = g.inverse_matrix();
  Tensor3 a(n);
  // a_{ij}^k = c_{il}^m g_{jm} g^{kl}; e runs over c_{il}^m
  for (const auto& e : spec.completed())
    for (int j = 0; j < n; ++j) {
      double gjm = G(j, e.k);
      if (gjm == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        double gkl = Gi(k, e.j);
        if (gkl != 0.0) a(e.i, j, k) += e.c * gjm * gkl;
      }
    }
  return a;
}

Tensor3 christoffel(const LieAlgebraSpec& spec, const MetricState& g) {
  check_dims(spec, g, "christoffel");
  const int n = spec.dim();
  const Eigen::MatrixXd G = g.matrix();
  const Eigen::MatrixXd Gi = g.inverse_matrix();
  // gB(i,j,l) = <[e_i, e_j], e_l> = c_{ij}^m g_{lm}
  Tensor3 gB(n);
  for (const auto& e : spec.completed())
    for (int l = 0; l < n; ++l) gB(e.i, e.j, l) += e.c * G(l, e.k);
  Tensor3 gamma(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double acc = 0.0;
        for (int l = 0; l < n; ++l) {
          double gi = Gi(k, l);
          if (gi != 0.0) acc += gi * (gB(i, j, l) - gB(i, l, j) - gB(j, l, i));
        }
        gamma(i, j, k) = 0.5 * acc;
      }
  return gamma;
}

// Both curvature routines evaluate the direct contraction formulas
//   4 R_{ijkl} = 2 c_{ij}^p c_{kl}^q g_pq + c_{ik}^p c_{jl}^q g_pq - c_{il}^p c_{jk}^q g_pq
//              - c_{ij}^p c_{pk}^q g_ql + c_{ij}^p c_{pl}^q g_qk
//              - c_{kl}^p c_{pi}^q g_qj + c_{kl}^p c_{pj}^q g_qi
//              + S_{ik}^p S_{jl}^q g_pq - S_{il}^p S_{jk}^q g_pq
// with S_{ij}^k = a_{ij}^k + a_{ji}^k, and 4 R_ij = (the same bracket at
// (k,i,j,m)) g^{km}. Sparsity of c is exploited; the S contractions go through
// rank-3 intermediates, so nothing above O(dim^4) memory-free work appears.

Eigen::MatrixXd ricci_general(const LieAlgebraSpec& spec, const MetricState& g) {
  check_dims(spec, g, "ricci_general");
  const int n = spec.dim();
  const Eigen::MatrixXd G = g.matrix();
  const Eigen::MatrixXd Gi = g.inverse_matrix();
  const Eigen::MatrixXd P = G * Gi;  // numerically the identity; kept explicit
  const auto& C = spec.completed();
  const auto& byf = spec.by_first();

  Eigen::MatrixXd R4 = Eigen::MatrixXd::Zero(n, n);

  for (const auto& e1 : C)
    for (const auto& e2 : C) {
      // T1: 2 c_{ki}^p c_{jm}^q g_pq g^km  -> R(i=e1.j, j=e2.i)
      R4(e1.j, e2.i) += 2.0 * e1.c * e2.c * G(e1.k, e2.k) * Gi(e1.i, e2.j);
      // T2: c_{kj}^p c_{im}^q g_pq g^km   -> R(i=e2.i, j=e1.j)
      R4(e2.i, e1.j) += e1.c * e2.c * G(e1.k, e2.k) * Gi(e1.i, e2.j);
      // T3: -c_{km}^p c_{ij}^q g_pq g^km -> R(i=e2.i, j=e2.j)
      R4(e2.i, e2.j) -= e1.c * e2.c * G(e1.k, e2.k) * Gi(e1.i, e1.j);
    }

  for (const auto& e1 : C) {
    for (const auto& e2 : byf[e1.k]) {
      // T4: -c_{ki}^p c_{pj}^q g_qm g^km -> R(e1.j, e2.j), sum_m collapses to P
      R4(e1.j, e2.j) -= e1.c * e2.c * P(e2.k, e1.i);
      // T5: +c_{ki}^p c_{pm}^q g_qj g^km -> R(e1.j, j) for all j
      double w5 = e1.c * e2.c * Gi(e1.i, e2.j);
      if (w5 != 0.0)
        for (int j = 0; j < n; ++j) R4(e1.j, j) += w5 * G(e2.k, j);
      // T6: -c_{jm}^p c_{pk}^q g_qi g^km -> R(i, e1.i) for all i
      double w6 = e1.c * e2.c * Gi(e2.j, e1.j);
      if (w6 != 0.0)
        for (int i = 0; i < n; ++i) R4(i, e1.i) -= w6 * G(e2.k, i);
      // T7: +c_{jm}^p c_{pi}^q g_qk g^km -> R(e2.j, e1.i), sum_k collapses to P
      R4(e2.j, e1.i) += e1.c * e2.c * P(e2.k, e1.j);
    }
  }

  // S terms
  Tensor3 a = adjoint_constants(spec, g);
  Tensor3 S(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) S(i, j, k) = a(i, j, k) + a(j, i, k);

  // T8: + S_{kj}^p S_{im}^q g_pq g^km
  Tensor3 W(n);  // W(k,j,q) = S_{kj}^p g_pq
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int q = 0; q < n; ++q) {
        double acc = 0.0;
        for (int p = 0; p < n; ++p) acc += S(k, j, p) * G(p, q);
        W(k, j, q) = acc;
      }
  Tensor3 X(n);  // X(j,m,q) = g^km W(k,j,q)
  for (int j = 0; j < n; ++j)
    for (int m = 0; m < n; ++m)
      for (int q = 0; q < n; ++q) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += Gi(k, m) * W(k, j, q);
        X(j, m, q) = acc;
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int m = 0; m < n; ++m)
        for (int q = 0; q < n; ++q) acc += X(j, m, q) * S(i, m, q);
      R4(i, j) += acc;
    }

  // T9: - S_{km}^p S_{ij}^q g_pq g^km
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int p = 0; p < n; ++p) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) acc += S(k, m, p) * Gi(k, m);
    y[p] = acc;
  }
  Eigen::VectorXd z = G.transpose() * y;  // z_q = g_pq y_p
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int q = 0; q < n; ++q) acc += S(i, j, q) * z[q];
      R4(i, j) -= acc;
    }

  return 0.25 * R4;
}

Eigen::VectorXd ricci_heisenberg_diag(int n, const Eigen::VectorXd& gdiag) {
  if (n < 1) throw std::domain_error("ricci_heisenberg_diag: n must be >= 1");
  if (gdiag.size() != 2 * n + 1)
    throw std::invalid_argument("ricci_heisenberg_diag: metric has wrong length");
  const double gN = gdiag[2 * n];
  double sigma = 0.0;
  for (int k = 0; k < n; ++k) sigma += 1.0 / (gdiag[k] * gdiag[k + n]);
  Eigen::VectorXd R(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    R[i] = -0.5 * gN / gdiag[i + n];
    R[i + n] = -0.5 * gN / gdiag[i];
  }
  R[2 * n] = 0.5 * gN * gN * sigma;
  return R;
}

Eigen::VectorXd ricci_unitriangular_diag(int n, const Eigen::VectorXd& gdiag) {
  IndexMap m = IndexMap::unitriangular(n);
  if (gdiag.size() != m.size())
    throw std::invalid_argument("ricci_unitriangular_diag: metric has wrong length");
  auto gp = [&](int i, int j) { return gdiag[m.flat(i, j)]; };
  Eigen::VectorXd R(m.size());
  for (int a = 0; a < m.size(); ++a) {
    auto [i, j] = m.pair_of(a);
    double acc = 0.0;
    for (int p = 1; p < i; ++p) acc -= gp(p, j) / gp(p, i);
    double mid = 0.0;
    for (int q = i + 1; q < j; ++q) mid += 1.0 / (gp(i, q) * gp(q, j));
    acc += gp(i, j) * gp(i, j) * mid;
    for (int r = j + 1; r <= n; ++r) acc -= gp(i, r) / gp(j, r);
    R[a] = 0.5 * acc;
  }
  return R;
}

Tensor4 riemann_general(const LieAlgebraSpec& spec, const MetricState& g) {
  check_dims(spec, g, "riemann_general");
  const int n = spec.dim();
  const Eigen::MatrixXd G = g.matrix();

  // b(i,j,:) = [e_i, e_j];  gb(i,j,:) = G b(i,j,:)
  Tensor3 b(n), gb(n);
  for (const auto& e : spec.completed()) b(e.i, e.j, e.k) += e.c;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) acc += G(l, m) * b(i, j, m);
        gb(i, j, l) = acc;
      }
  // gd(i,j,k,:) = G [[e_i, e_j], e_k]
  Tensor4 gd(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd bij(n);
      for (int m = 0; m < n; ++m) bij[m] = b(i, j, m);
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXd w = G * spec.bracket_right(bij, k);
        for (int l = 0; l < n; ++l) gd(i, j, k, l) = w[l];
      }
    }

  Tensor3 a = adjoint_constants(spec, g);
  Tensor3 S(n), GS(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) S(i, j, k) = a(i, j, k) + a(j, i, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int p = 0; p < n; ++p) {
        double acc = 0.0;
        for (int q = 0; q < n; ++q) acc += G(p, q) * S(i, j, q);
        GS(i, j, p) = acc;
      }

  auto dot3 = [n](const Tensor3& u, int ui, int uj, const Tensor3& v, int vi, int vj) {
    double acc = 0.0;
    for (int p = 0; p < n; ++p) acc += u(ui, uj, p) * v(vi, vj, p);
    return acc;
  };

  Tensor4 R(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double t = 2.0 * dot3(b, i, j, gb, k, l) + dot3(b, i, k, gb, j, l) -
                     dot3(b, i, l, gb, j, k);
          t += -gd(i, j, k, l) + gd(i, j, l, k) - gd(k, l, i, j) + gd(k, l, j, i);
          t += dot3(S, i, k, GS, j, l) - dot3(S, i, l, GS, j, k);
          R(i, j, k, l) = 0.25 * t;
        }
  return R;
}

double sectional(const LieAlgebraSpec& spec, const MetricState& g, int i, int j) {
  check_dims(spec, g, "sectional");
  const int n = spec.dim();
  if (i < 0 || j < 0 || i >= n || j >= n)
    throw std::invalid_argument("sectional: basis index out of range");
  if (i == j) throw std::invalid_argument("sectional: requires two distinct basis directions");
  const Eigen::MatrixXd G = g.matrix();
  double den = G(i, i) * G(j, j) - G(i, j) * G(i, j);
  if (den <= 1e-14)
    throw DegeneratePlaneError("sectional: span(e_" + std::to_string(i + 1) + ", e_" +
                               std::to_string(j + 1) + ") is numerically degenerate");

  Eigen::VectorXd bij = spec.bracket_basis(i, j);
  Eigen::VectorXd w1 = G * spec.bracket_right(bij, j);  // <[[e_i,e_j],e_j], .>
  Eigen::VectorXd w2 = G * spec.bracket_right(bij, i);  // <[[e_i,e_j],e_i], .>
  Tensor3 a = adjoint_constants(spec, g);
  Eigen::VectorXd Sij(n), aii(n), ajj(n);
  for (int p = 0; p < n; ++p) {
    Sij[p] = a(i, j, p) + a(j, i, p);
    aii[p] = a(i, i, p);
    ajj[p] = a(j, j, p);
  }
  double num = -3.0 * bij.dot(G * bij) - 2.0 * w1[i] + 2.0 * w2[j] + Sij.dot(G * Sij) -
               4.0 * aii.dot(G * ajj);
  return 0.25 * num / den;
}

double scalar_curvature(const LieAlgebraSpec& spec, const MetricState& g) {
  Eigen::MatrixXd R = ricci_general(spec, g);
  return (g.inverse_matrix() * R).trace();
}

CurvatureBundle curvature_bundle(const LieAlgebraSpec& spec, const MetricState& g,
                                 const CurvatureOptions& opts) {
  CurvatureBundle b;
  b.christoffel = christoffel(spec, g);
  b.ricci = ricci_general(spec, g);
  b.scalar = (g.inverse_matrix() * b.ricci).trace();
  if (opts.with_riemann) b.riemann = riemann_general(spec, g);
  for (auto [i, j] : opts.sectional_planes)
    b.sectional_values.emplace_back(i, j, sectional(spec, g, i, j));
  b.ill_conditioned = g.ill_conditioned();
  return b;
}

}  // namespace nilflow
