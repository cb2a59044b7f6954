#pragma once

#include "nilflow/algebra.hpp"
#include "nilflow/metric.hpp"

#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace nilflow {

struct Tensor3 {
  int dim = 0;
  std::vector<double> v;
  Tensor3() = default;
  explicit Tensor3(int d) : dim(d), v(static_cast<size_t>(d) * d * d, 0.0) {}
  double& operator()(int i, int j, int k) {
    return v[(static_cast<size_t>(i) * dim + j) * dim + k];
  }
  double operator()(int i, int j, int k) const {
    return v[(static_cast<size_t>(i) * dim + j) * dim + k];
  }
};

struct Tensor4 {
  int dim = 0;
  std::vector<double> v;
  Tensor4() = default;
  explicit Tensor4(int d) : dim(d), v(static_cast<size_t>(d) * d * d * d, 0.0) {}
  double& operator()(int i, int j, int k, int l) {
    return v[((static_cast<size_t>(i) * dim + j) * dim + k) * dim + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return v[((static_cast<size_t>(i) * dim + j) * dim + k) * dim + l];
  }
};

struct DegeneratePlaneError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// a_{ij}^k = c_{il}^m g_{jm} g^{kl}: coefficients of (ad e_i)^* e_j, i.e.
/// <a_{ij}^k e_k, e_l> = <e_j, [e_i, e_l]>.
Tensor3 adjoint_constants(const LieAlgebraSpec& spec, const MetricState& g);

/// Levi-Civita coefficients gamma_{ij}^k of nabla_{e_i} e_j:
/// gamma_{ij}^k = (1/2) g^{kl} (c_{ij}^m g_{lm} - c_{il}^m g_{jm} - c_{jl}^m g_{im}).
Tensor3 christoffel(const LieAlgebraSpec& spec, const MetricState& g);

/// Ricci tensor of any left-invariant metric, by direct contraction of the
/// structure constants (no symbolic differentiation). Symmetric to rounding.
Eigen::MatrixXd ricci_general(const LieAlgebraSpec& spec, const MetricState& g);

/// Diagonal-metric fast path on heisenberg(n), components in basis order:
/// R_i = -g_N/(2 g_{i+n}), R_{i+n} = -g_N/(2 g_i), R_N = (1/2) g_N^2 Sigma,
/// Sigma = sum_k 1/(g_k g_{k+n}).
Eigen::VectorXd ricci_heisenberg_diag(int n, const Eigen::VectorXd& gdiag);

/// Diagonal-metric fast path on unitriangular(n), flat (j-i, i) order:
/// 4 R_ij = -2 sum_{p<i} g_pj/g_pi + 2 g_ij^2 sum_{i<q<j} 1/(g_iq g_qj)
///          - 2 sum_{j<r<=n} g_ir/g_jr.
Eigen::VectorXd ricci_unitriangular_diag(int n, const Eigen::VectorXd& gdiag);

/// (4,0) curvature tensor, R_{ijkl} = <R(e_i, e_j) e_k, e_l>.
Tensor4 riemann_general(const LieAlgebraSpec& spec, const MetricState& g);

/// Sectional curvature of span(e_i, e_j); requires i != j and a nondegenerate
/// plane (g_ii g_jj - g_ij^2 above 1e-14), else DegeneratePlaneError.
double sectional(const LieAlgebraSpec& spec, const MetricState& g, int i, int j);

/// Scalar curvature g^{ij} R_ij.
double scalar_curvature(const LieAlgebraSpec& spec, const MetricState& g);

struct CurvatureOptions {
  bool with_riemann = false;
  std::vector<std::pair<int, int>> sectional_planes;  // 0-based
};

struct CurvatureBundle {
  Tensor3 christoffel;
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
  std::optional<Tensor4> riemann;
  std::vector<std::tuple<int, int, double>> sectional_values;
  bool ill_conditioned = false;
};

CurvatureBundle curvature_bundle(const LieAlgebraSpec& spec, const MetricState& g,
                                 const CurvatureOptions& opts = {});

}  // namespace nilflow
