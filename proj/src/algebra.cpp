#include "nilflow/algebra.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace nilflow {

namespace {

[[noreturn]] void bad_entry(const BracketEntry& e, const std::string& why) {
  // messages report 1-based indices, matching the file format
  throw std::invalid_argument("LieAlgebraSpec: entry (i=" + std::to_string(e.i + 1) +
                              ", j=" + std::to_string(e.j + 1) +
                              ", k=" + std::to_string(e.k + 1) + "): " + why);
}

}  // namespace

int IndexMap::flat(int i, int j) const {
  if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("IndexMap::flat: pair out of range");
  int f = lookup_[static_cast<size_t>(i - 1) * n + (j - 1)];
  if (f < 0) throw std::out_of_range("IndexMap::flat: no such pair");
  return f;
}

std::pair<int, int> IndexMap::pair_of(int a) const {
  if (a < 0 || a >= size()) throw std::out_of_range("IndexMap::pair_of: index out of range");
  return pairs[a];
}

IndexMap IndexMap::unitriangular(int n) {
  if (n < 2) throw std::domain_error("IndexMap::unitriangular: n must be >= 2");
  IndexMap m;
  m.n = n;
  m.lookup_.assign(static_cast<size_t>(n) * n, -1);
  for (int d = 1; d < n; ++d)
    for (int i = 1; i + d <= n; ++i) {
      m.lookup_[static_cast<size_t>(i - 1) * n + (i + d - 1)] = m.size();
      m.pairs.emplace_back(i, i + d);
    }
  return m;
}

LieAlgebraSpec::LieAlgebraSpec(int dim, std::vector<BracketEntry> entries,
                               std::vector<std::string> labels)
    : dim_(dim), entries_(std::move(entries)), labels_(std::move(labels)) {
  if (dim_ <= 0) throw std::invalid_argument("LieAlgebraSpec: dimension must be positive");
  std::set<std::tuple<int, int, int>> seen;
  for (const auto& e : entries_) {
    if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim_ || e.j >= dim_ || e.k >= dim_)
      bad_entry(e, "index out of range for dimension " + std::to_string(dim_));
    if (e.i >= e.j) bad_entry(e, "requires i < j (store the canonical orientation only)");
    if (e.c == 0.0) bad_entry(e, "zero structure constant stored");
    if (!seen.insert({e.i, e.j, e.k}).second) bad_entry(e, "duplicate (i, j, k)");
  }
  if (labels_.empty()) {
    labels_.reserve(dim_);
    for (int i = 0; i < dim_; ++i) labels_.push_back(std::to_string(i + 1));
  } else if (static_cast<int>(labels_.size()) != dim_) {
    throw std::invalid_argument("LieAlgebraSpec: label count does not match dimension");
  }
  completed_.reserve(2 * entries_.size());
  for (const auto& e : entries_) {
    completed_.push_back(e);
    completed_.push_back({e.j, e.i, e.k, -e.c});
  }
  by_first_.resize(dim_);
  for (const auto& e : completed_) by_first_[e.i].push_back(e);
}

Eigen::VectorXd LieAlgebraSpec::bracket_basis(int i, int j) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim_);
  for (const auto& e : by_first_[i])
    if (e.j == j) w[e.k] += e.c;
  return w;
}

Eigen::VectorXd LieAlgebraSpec::bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim_);
  for (const auto& e : completed_) w[e.k] += e.c * u[e.i] * v[e.j];
  return w;
}

Eigen::VectorXd LieAlgebraSpec::bracket_left(int i, const Eigen::VectorXd& v) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim_);
  for (const auto& e : by_first_[i]) w[e.k] += e.c * v[e.j];
  return w;
}

Eigen::VectorXd LieAlgebraSpec::bracket_right(const Eigen::VectorXd& v, int j) const {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(dim_);
  for (const auto& e : completed_)
    if (e.j == j) w[e.k] += e.c * v[e.i];
  return w;
}

ValidationReport validate(const LieAlgebraSpec& spec, double jacobi_tol, double rank_tol) {
  ValidationReport r;
  r.jacobi_tol = jacobi_tol;
  const int n = spec.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Eigen::VectorXd w = spec.bracket_right(spec.bracket_basis(i, j), k) +
                            spec.bracket_right(spec.bracket_basis(j, k), i) +
                            spec.bracket_right(spec.bracket_basis(k, i), j);
        worst = std::max(worst, w.lpNorm<Eigen::Infinity>());
      }
  r.jacobi_residual = worst;
  r.nilpotency_step = nilpotency_step(spec, rank_tol);
  r.nilpotent = r.nilpotency_step > 0;
  return r;
}

int nilpotency_step(const LieAlgebraSpec& spec, double rank_tol) {
  const int n = spec.dim();
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(n, n);
  int prev_rank = n;
  for (int step = 1; step <= n + 1; ++step) {
    Eigen::MatrixXd img(n, static_cast<Eigen::Index>(n) * basis.cols());
    for (int i = 0; i < n; ++i)
      for (Eigen::Index c = 0; c < basis.cols(); ++c)
        img.col(static_cast<Eigen::Index>(i) * basis.cols() + c) =
            spec.bracket_left(i, basis.col(c));
    if (img.lpNorm<Eigen::Infinity>() == 0.0) return step;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(img);
    qr.setThreshold(rank_tol);
    int r = static_cast<int>(qr.rank());
    if (r == 0) return step;
    if (r >= prev_rank) return -1;  // series stabilized at a nonzero subspace
    basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    prev_rank = r;
  }
  return -1;
}

LieAlgebraSpec heisenberg(int n) {
  if (n < 1) throw std::domain_error("heisenberg: n must be >= 1");
  const int N = 2 * n + 1;
  std::vector<BracketEntry> entries;
  entries.reserve(n);
  for (int i = 0; i < n; ++i) entries.push_back({i, i + n, N - 1, 1.0});
  return LieAlgebraSpec(N, std::move(entries));
}

LieAlgebraSpec unitriangular(int n) {
  if (n < 2) throw std::domain_error("unitriangular: n must be >= 2");
  IndexMap m = IndexMap::unitriangular(n);
  std::vector<BracketEntry> entries;
  for (int a = 0; a < m.size(); ++a)
    for (int b = a + 1; b < m.size(); ++b) {
      auto [i, j] = m.pair_of(a);
      auto [k, l] = m.pair_of(b);
      // [B_ij, B_kl] = delta_jk B_il - delta_il B_kj (the deltas are exclusive)
      if (j == k)
        entries.push_back({a, b, m.flat(i, l), 1.0});
      else if (i == l)
        entries.push_back({a, b, m.flat(k, j), -1.0});
    }
  std::vector<std::string> labels;
  labels.reserve(m.size());
  for (const auto& [i, j] : m.pairs)
    labels.push_back(n <= 9 ? std::to_string(i) + std::to_string(j)
                            : std::to_string(i) + "_" + std::to_string(j));
  return LieAlgebraSpec(m.size(), std::move(entries), std::move(labels));
}

double is_derivation(const LieAlgebraSpec& spec, const Eigen::MatrixXd& D) {
  const int n = spec.dim();
  if (D.rows() != n || D.cols() != n)
    throw std::invalid_argument("is_derivation: matrix dimension mismatch");
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXd r = D * spec.bracket_basis(i, j) -
                          spec.bracket_right(D.col(i), j) - spec.bracket_left(i, D.col(j));
      worst = std::max(worst, r.lpNorm<Eigen::Infinity>());
    }
  return worst;
}

namespace {

bool same_entries(const LieAlgebraSpec& a, const LieAlgebraSpec& b) {
  if (a.dim() != b.dim() || a.entries().size() != b.entries().size()) return false;
  auto key = [](const BracketEntry& e) { return std::tuple(e.i, e.j, e.k, e.c); };
  std::vector<std::tuple<int, int, int, double>> ka, kb;
  for (const auto& e : a.entries()) ka.push_back(key(e));
  for (const auto& e : b.entries()) kb.push_back(key(e));
  std::sort(ka.begin(), ka.end());
  std::sort(kb.begin(), kb.end());
  return ka == kb;
}

}  // namespace

FamilyInfo detect_family(const LieAlgebraSpec& spec) {
  const int d = spec.dim();
  if (d % 2 == 1 && d >= 3) {
    int n = (d - 1) / 2;
    if (same_entries(spec, heisenberg(n))) return {Family::heisenberg, n};
  }
  // d = n(n-1)/2  <=>  n = (1 + sqrt(1+8d))/2
  int n = static_cast<int>(std::lround((1.0 + std::sqrt(1.0 + 8.0 * d)) / 2.0));
  if (n >= 2 && n * (n - 1) / 2 == d && same_entries(spec, unitriangular(n)))
    return {Family::unitriangular, n};
  return {Family::other, 0};
}

}  // namespace nilflow
