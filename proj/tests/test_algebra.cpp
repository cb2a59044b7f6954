#include "nilflow/algebra.hpp"

#include "doctest.h"

#include <set>

using namespace nilflow;

TEST_CASE("index map flattening, offset-major order") {
  IndexMap m = IndexMap::unitriangular(4);
  REQUIRE(m.size() == 6);
  CHECK(m.pairs == std::vector<std::pair<int, int>>{
                       {1, 2}, {2, 3}, {3, 4}, {1, 3}, {2, 4}, {1, 4}});
  CHECK(m.flat(1, 2) == 0);
  CHECK(m.flat(3, 4) == 2);
  CHECK(m.flat(1, 3) == 3);
  CHECK(m.flat(1, 4) == 5);
  for (int a = 0; a < m.size(); ++a) {
    auto [i, j] = m.pair_of(a);
    CHECK(m.flat(i, j) == a);
  }
  CHECK_THROWS_AS(m.flat(2, 2), std::out_of_range);
  CHECK_THROWS_AS(m.flat(0, 1), std::out_of_range);
}

TEST_CASE("generated heisenberg constants") {
  LieAlgebraSpec h = heisenberg(3);
  REQUIRE(h.dim() == 7);
  REQUIRE(h.entries().size() == 3);
  for (int i = 0; i < 3; ++i) {
    const auto& e = h.entries()[i];
    CHECK(e.i == i);
    CHECK(e.j == i + 3);
    CHECK(e.k == 6);
    CHECK(e.c == 1.0);
  }
  CHECK(h.completed().size() == 6);
}

TEST_CASE("generated unitriangular constants") {
  LieAlgebraSpec u = unitriangular(4);
  REQUIRE(u.dim() == 6);
  // one bracket per increasing triple i < j < k: [B_ij, B_jk] = B_ik
  CHECK(u.entries().size() == 4);
  CHECK(u.labels() == std::vector<std::string>{"12", "23", "34", "13", "24", "14"});

  IndexMap m = IndexMap::unitriangular(4);
  Eigen::VectorXd b = u.bracket_basis(m.flat(1, 2), m.flat(2, 3));
  CHECK(b[m.flat(1, 3)] == 1.0);
  CHECK(b.cwiseAbs().sum() == 1.0);
  b = u.bracket_basis(m.flat(1, 3), m.flat(3, 4));
  CHECK(b[m.flat(1, 4)] == 1.0);
  b = u.bracket_basis(m.flat(2, 3), m.flat(1, 2));
  CHECK(b[m.flat(1, 3)] == -1.0);
  // disjoint generators commute
  CHECK(u.bracket_basis(m.flat(1, 2), m.flat(3, 4)).isZero(0.0));
}

TEST_CASE("unitriangular(3) coincides with heisenberg(1)") {
  LieAlgebraSpec u = unitriangular(3), h = heisenberg(1);
  REQUIRE(u.dim() == h.dim());
  REQUIRE(u.entries().size() == h.entries().size());
  for (size_t a = 0; a < u.entries().size(); ++a) {
    CHECK(u.entries()[a].i == h.entries()[a].i);
    CHECK(u.entries()[a].j == h.entries()[a].j);
    CHECK(u.entries()[a].k == h.entries()[a].k);
    CHECK(u.entries()[a].c == h.entries()[a].c);
  }
}

TEST_CASE("bracket bilinearity and antisymmetry") {
  LieAlgebraSpec u = unitriangular(4);
  Eigen::VectorXd x(6), y(6);
  x << 1, -2, 0.5, 3, 0, -1;
  y << 0.25, 1, 1, -1, 2, 0;
  Eigen::VectorXd xy = u.bracket(x, y);
  CHECK((xy + u.bracket(y, x)).cwiseAbs().maxCoeff() == 0.0);
  Eigen::VectorXd lhs = u.bracket(2.0 * x + y, y);
  Eigen::VectorXd rhs = 2.0 * u.bracket(x, y) + u.bracket(y, y);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
  for (int i = 0; i < 6; ++i) {
    CHECK((u.bracket_left(i, y) - u.bracket(Eigen::VectorXd::Unit(6, i), y))
              .cwiseAbs()
              .maxCoeff() == 0.0);
    CHECK((u.bracket_right(x, i) - u.bracket(x, Eigen::VectorXd::Unit(6, i)))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}

TEST_CASE("constructor rejects malformed entries") {
  CHECK_THROWS_AS(LieAlgebraSpec(3, {{1, 0, 2, 1.0}}), std::invalid_argument);  // i >= j
  CHECK_THROWS_AS(LieAlgebraSpec(3, {{0, 0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(LieAlgebraSpec(3, {{0, 1, 3, 1.0}}), std::invalid_argument);  // range
  CHECK_THROWS_AS(LieAlgebraSpec(3, {{0, 1, 2, 0.0}}), std::invalid_argument);  // zero
  CHECK_THROWS_AS(LieAlgebraSpec(3, {{0, 1, 2, 1.0}, {0, 1, 2, 0.5}}),
                  std::invalid_argument);  // duplicate
  CHECK_THROWS_AS(LieAlgebraSpec(0, {}), std::invalid_argument);
}

TEST_CASE("validation: generated families pass with the right step") {
  for (int n = 1; n <= 4; ++n) {
    ValidationReport r = validate(heisenberg(n));
    CHECK(r.jacobi_residual == 0.0);
    CHECK(r.nilpotent);
    CHECK(r.nilpotency_step == 2);
    CHECK(r.pass());
  }
  for (int n = 3; n <= 6; ++n) {
    ValidationReport r = validate(unitriangular(n));
    CHECK(r.jacobi_residual == 0.0);
    CHECK(r.nilpotency_step == n - 1);
    CHECK(r.pass());
  }
  // n = 2 is one-dimensional, hence abelian
  CHECK(validate(unitriangular(2)).nilpotency_step == 1);
  CHECK(validate(LieAlgebraSpec(4, {})).nilpotency_step == 1);
}

TEST_CASE("validation: jacobi failure detected") {
  // [e1,e2] = e3, [e1,e3] = e1 breaks the cyclic sum by -e3
  LieAlgebraSpec bad(3, {{0, 1, 2, 1.0}, {0, 2, 0, 1.0}});
  ValidationReport r = validate(bad);
  CHECK(r.jacobi_residual == doctest::Approx(1.0));
  CHECK_FALSE(r.pass());
}

TEST_CASE("validation: solvable but not nilpotent detected") {
  // [e1,e2] = e3, [e1,e3] = e2 satisfies Jacobi; the series stalls at
  // span(e2, e3)
  LieAlgebraSpec s(3, {{0, 1, 2, 1.0}, {0, 2, 1, 1.0}});
  ValidationReport r = validate(s);
  CHECK(r.jacobi_ok());
  CHECK_FALSE(r.nilpotent);
  CHECK(r.nilpotency_step == -1);
  CHECK_FALSE(r.pass());
}

TEST_CASE("derivation residual") {
  LieAlgebraSpec h = heisenberg(1);
  Eigen::MatrixXd D = Eigen::VectorXd{{1.0, 1.0, 2.0}}.asDiagonal();
  CHECK(is_derivation(h, D) == 0.0);
  CHECK(is_derivation(h, Eigen::MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  // ad_x is always a derivation
  LieAlgebraSpec u = unitriangular(4);
  Eigen::VectorXd x(6);
  x << 1, -0.5, 2, 0.25, 1, -3;
  Eigen::MatrixXd ad(6, 6);
  for (int j = 0; j < 6; ++j) ad.col(j) = u.bracket(x, Eigen::VectorXd::Unit(6, j));
  CHECK(is_derivation(u, ad) < 1e-14);
}

TEST_CASE("family detection") {
  CHECK(detect_family(heisenberg(3)).family == Family::heisenberg);
  CHECK(detect_family(heisenberg(3)).n == 3);
  CHECK(detect_family(unitriangular(4)).family == Family::unitriangular);
  CHECK(detect_family(unitriangular(4)).n == 4);
  // the overlap case reports the smaller family
  FamilyInfo f = detect_family(unitriangular(3));
  CHECK(f.family == Family::heisenberg);
  CHECK(f.n == 1);
  LieAlgebraSpec s(3, {{0, 1, 2, 1.0}, {0, 2, 1, 1.0}});
  CHECK(detect_family(s).family == Family::other);
  CHECK(detect_family(LieAlgebraSpec(3, {})).family == Family::other);
}

TEST_CASE("jacobi holds for every generated family pair") {
  // quadratic in the constants, so spot-check beyond what validate() reports
  for (int n : {5, 6}) {
    LieAlgebraSpec u = unitriangular(n);
    ValidationReport r = validate(u);
    CHECK(r.jacobi_residual == 0.0);
    std::set<int> ks;
    for (const auto& e : u.entries()) ks.insert(e.k);
    // brackets only produce offset >= 2 positions
    IndexMap m = IndexMap::unitriangular(n);
    for (int k : ks) {
      auto [i, j] = m.pair_of(k);
      CHECK(j - i >= 2);
    }
  }
}
