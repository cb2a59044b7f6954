#pragma once

#include <Eigen/Dense>

#include <stdexcept>

namespace nilflow {

struct MetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Left-invariant metric in the algebra basis: either a positive diagonal or a
/// full symmetric positive-definite matrix. The inverse is computed eagerly
/// (diagonal reciprocals, or an LLT solve), so const instances are safe to
/// share across threads.
class MetricState {
 public:
  enum class Kind { diagonal, full };

  /// Throws MetricError unless every entry is strictly positive.
  static MetricState diagonal(Eigen::VectorXd d);
  /// Requires symmetry to 1e-12 (relative); stores the symmetrized matrix.
  /// Throws MetricError unless positive definite.
  static MetricState full(Eigen::MatrixXd m);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  bool is_diagonal() const { return kind_ == Kind::diagonal; }

  const Eigen::VectorXd& diag() const;          // diagonal kind only
  const Eigen::VectorXd& diag_inverse() const;  // diagonal kind only
  Eigen::MatrixXd matrix() const;
  Eigen::MatrixXd inverse_matrix() const;
  double g(int i, int j) const;
  double ginv(int i, int j) const;

  /// Ratio of extreme eigenvalues; computed on demand.
  double condition() const;
  bool ill_conditioned() const { return condition() > 1e12; }

  /// Row-major vectorization of the lower triangle (i >= j), used by the flow
  /// integrator in general mode.
  Eigen::VectorXd lower() const;
  static MetricState from_lower(int dim, const Eigen::VectorXd& v);
  static Eigen::MatrixXd lower_to_sym(int dim, const Eigen::VectorXd& v);
  static bool lower_is_positive_definite(int dim, const Eigen::VectorXd& v);

 private:
  MetricState() = default;
  Kind kind_ = Kind::diagonal;
  int dim_ = 0;
  Eigen::VectorXd diag_, dinv_;
  Eigen::MatrixXd mat_, inv_;
};

}  // namespace nilflow
