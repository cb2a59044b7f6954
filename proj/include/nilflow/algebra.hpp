#pragma once

#include <Eigen/Core>

#include <string>
#include <utility>
#include <vector>

namespace nilflow {

/// One structure constant c_{ij}^k = <coefficient of e_k in [e_i, e_j]>,
/// stored for i < j only. The antisymmetric completion c_{ji}^k = -c_{ij}^k
/// is implied and materialized in LieAlgebraSpec::completed().
///
/// Indices are 0-based in memory. File formats and the CLI use 1-based
/// indices; conversion happens at the I/O boundary only.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Flattening of strictly-upper-triangular matrix positions (i, j), i < j <= n,
/// onto a single 0-based basis index, ordered by diagonal offset j - i first,
/// then by i. Pair entries (i, j) are 1-based matrix positions.
struct IndexMap {
  int n = 0;
  std::vector<std::pair<int, int>> pairs;

  int size() const { return static_cast<int>(pairs.size()); }
  int flat(int i, int j) const;
  std::pair<int, int> pair_of(int a) const;

  static IndexMap unitriangular(int n);

 private:
  std::vector<int> lookup_;  // (i-1)*n + (j-1) -> flat index, -1 where absent
};

/// Structure constants of a finite-dimensional real Lie algebra in a fixed
/// basis. The constructor enforces structural well-formedness (index ranges,
/// canonical i < j, no duplicates, nonzero values); the mathematical checks
/// (Jacobi, nilpotency) live in validate().
class LieAlgebraSpec {
 public:
  LieAlgebraSpec(int dim, std::vector<BracketEntry> entries,
                 std::vector<std::string> labels = {});

  int dim() const { return dim_; }
  const std::vector<BracketEntry>& entries() const { return entries_; }
  /// Both orientations: for every stored (i,j,k,c) also (j,i,k,-c).
  const std::vector<BracketEntry>& completed() const { return completed_; }
  /// completed() grouped by first index.
  const std::vector<std::vector<BracketEntry>>& by_first() const { return by_first_; }
  const std::vector<std::string>& labels() const { return labels_; }

  /// [e_i, e_j] as a dense coefficient vector. Any i, j.
  Eigen::VectorXd bracket_basis(int i, int j) const;
  /// [u, v] for arbitrary coefficient vectors.
  Eigen::VectorXd bracket(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// [e_i, v]
  Eigen::VectorXd bracket_left(int i, const Eigen::VectorXd& v) const;
  /// [v, e_j]
  Eigen::VectorXd bracket_right(const Eigen::VectorXd& v, int j) const;

 private:
  int dim_ = 0;
  std::vector<BracketEntry> entries_;
  std::vector<BracketEntry> completed_;
  std::vector<std::vector<BracketEntry>> by_first_;
  std::vector<std::string> labels_;
};

struct ValidationReport {
  double jacobi_residual = 0.0;
  double jacobi_tol = 1e-12;
  bool nilpotent = false;
  int nilpotency_step = -1;  // -1 when not nilpotent
  bool jacobi_ok() const { return jacobi_residual <= jacobi_tol; }
  bool pass() const { return jacobi_ok() && nilpotent; }
};

/// Jacobi identity residual (max over basis triples, sup norm) and nilpotency
/// via the lower central series. rank_tol is the relative pivot threshold for
/// the rank decisions; generated integer-constant families are exact.
ValidationReport validate(const LieAlgebraSpec& spec, double jacobi_tol = 1e-12,
                          double rank_tol = 1e-10);

/// Smallest s with g^{s+1} = 0 (g^1 = g, g^{p+1} = [g, g^p]); -1 if the series
/// stabilizes at a nonzero subspace. Abelian algebras have step 1.
int nilpotency_step(const LieAlgebraSpec& spec, double rank_tol = 1e-10);

/// Heisenberg algebra h_{2n+1}: basis E_1..E_n, E_{n+1}..E_{2n}, E_N with
/// [E_i, E_{i+n}] = E_N. Requires n >= 1.
LieAlgebraSpec heisenberg(int n);

/// Strictly upper triangular n x n matrices with elementary-matrix basis
/// B_{ij}, flattened per IndexMap::unitriangular. [B_ij, B_kl] =
/// delta_jk B_il - delta_il B_kj. Requires n >= 2; dimension n(n-1)/2.
LieAlgebraSpec unitriangular(int n);

/// Max over basis pairs i < j of | D[e_i,e_j] - [De_i,e_j] - [e_i,De_j] |_inf.
/// D acts on coefficient vectors by matrix multiplication (columns are images
/// of basis vectors). Zero iff D is a derivation.
double is_derivation(const LieAlgebraSpec& spec, const Eigen::MatrixXd& D);

enum class Family { heisenberg, unitriangular, other };

struct FamilyInfo {
  Family family = Family::other;
  int n = 0;
};

/// Recognize a spec as an exactly generated family (entry-for-entry match).
/// unitriangular(3) has the same structure constants as heisenberg(1) and is
/// reported as heisenberg; every downstream fast path agrees on it.
FamilyInfo detect_family(const LieAlgebraSpec& spec);

}  // namespace nilflow
