#include "nilflow/metric.hpp"

#include <cmath>

namespace nilflow {

MetricState MetricState::diagonal(Eigen::VectorXd d) {
  if (d.size() == 0) throw MetricError("MetricState: empty diagonal");
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!(d[i] > 0.0) || !std::isfinite(d[i]))
      throw MetricError("MetricState: diagonal entry " + std::to_string(i + 1) +
                        " is not strictly positive");
  MetricState m;
  m.kind_ = Kind::diagonal;
  m.dim_ = static_cast<int>(d.size());
  m.dinv_ = d.cwiseInverse();
  m.diag_ = std::move(d);
  return m;
}

MetricState MetricState::full(Eigen::MatrixXd mat) {
  if (mat.rows() == 0 || mat.rows() != mat.cols())
    throw MetricError("MetricState: metric matrix must be square and nonempty");
  double scale = std::max(1.0, mat.cwiseAbs().maxCoeff());
  if ((mat - mat.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw MetricError("MetricState: metric matrix is not symmetric");
  MetricState m;
  m.kind_ = Kind::full;
  m.dim_ = static_cast<int>(mat.rows());
  m.mat_ = 0.5 * (mat + mat.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(m.mat_);
  if (llt.info() != Eigen::Success)
    throw MetricError("MetricState: metric matrix is not positive definite");
  m.inv_ = llt.solve(Eigen::MatrixXd::Identity(m.dim_, m.dim_));
  m.inv_ = 0.5 * (m.inv_ + m.inv_.transpose());
  return m;
}

const Eigen::VectorXd& MetricState::diag() const {
  if (kind_ != Kind::diagonal) throw MetricError("MetricState::diag: metric is not diagonal");
  return diag_;
}

const Eigen::VectorXd& MetricState::diag_inverse() const {
  if (kind_ != Kind::diagonal)
    throw MetricError("MetricState::diag_inverse: metric is not diagonal");
  return dinv_;
}

Eigen::MatrixXd MetricState::matrix() const {
  if (kind_ == Kind::diagonal) return diag_.asDiagonal();
  return mat_;
}

Eigen::MatrixXd MetricState::inverse_matrix() const {
  if (kind_ == Kind::diagonal) return dinv_.asDiagonal();
  return inv_;
}

double MetricState::g(int i, int j) const {
  if (kind_ == Kind::diagonal) return i == j ? diag_[i] : 0.0;
  return mat_(i, j);
}

double MetricState::ginv(int i, int j) const {
  if (kind_ == Kind::diagonal) return i == j ? dinv_[i] : 0.0;
  return inv_(i, j);
}

double MetricState::condition() const {
  if (kind_ == Kind::diagonal) return diag_.maxCoeff() / diag_.minCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat_, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  double lo = ev.minCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / lo;
}

Eigen::VectorXd MetricState::lower() const {
  Eigen::VectorXd v(static_cast<Eigen::Index>(dim_) * (dim_ + 1) / 2);
  Eigen::Index p = 0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j <= i; ++j) v[p++] = g(i, j);
  return v;
}

Eigen::MatrixXd MetricState::lower_to_sym(int dim, const Eigen::VectorXd& v) {
  if (v.size() != static_cast<Eigen::Index>(dim) * (dim + 1) / 2)
    throw MetricError("lower_to_sym: vector length does not match dimension");
  Eigen::MatrixXd m(dim, dim);
  Eigen::Index p = 0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      m(i, j) = v[p];
      m(j, i) = v[p];
      ++p;
    }
  return m;
}

MetricState MetricState::from_lower(int dim, const Eigen::VectorXd& v) {
  return full(lower_to_sym(dim, v));
}

bool MetricState::lower_is_positive_definite(int dim, const Eigen::VectorXd& v) {
  if (!v.allFinite()) return false;
  Eigen::MatrixXd m = lower_to_sym(dim, v);
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace nilflow
