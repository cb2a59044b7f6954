#include "nilflow/rng.hpp"

#include <cmath>

namespace nilflow {

MetricState random_diag_metric(int dim, std::uint64_t seed, double lo, double hi) {
  SplitMix64 rng(seed);
  const double llo = std::log(lo), lhi = std::log(hi);
  Eigen::VectorXd d(dim);
  for (int i = 0; i < dim; ++i) d[i] = std::exp(rng.uniform(llo, lhi));
  return MetricState::diagonal(std::move(d));
}

MetricState random_full_metric(int dim, std::uint64_t seed) {
  SplitMix64 rng(seed);
  // A A^T + dim * I: symmetric, eigenvalues in [dim, dim + O(dim)], so the
  // condition number stays small at every tested dimension.
  Eigen::MatrixXd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = rng.uniform(-1.0, 1.0);
  Eigen::MatrixXd m = a * a.transpose() + double(dim) * Eigen::MatrixXd::Identity(dim, dim);
  return MetricState::full(std::move(m));
}

}  // namespace nilflow
