#include "nilflow/flow.hpp"

#include "nilflow/curvature.hpp"
#include "nilflow/rng.hpp"

#include "doctest.h"

#include <cmath>

using namespace nilflow;

TEST_CASE("dopri5: smooth reference problems") {
  ode::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;

  SUBCASE("exponential") {
    auto f = [](double, const Eigen::VectorXd& y) { return y; };
    std::vector<double> ts{0.0, 0.5, 1.0, 2.0};
    ode::Samples s = ode::integrate_dopri5(f, Eigen::VectorXd::Ones(1), 0.0, 2.0, ts, opt);
    REQUIRE(s.t.size() == 4);
    for (size_t i = 0; i < ts.size(); ++i)
      CHECK(s.y[i][0] == doctest::Approx(std::exp(ts[i])).epsilon(1e-11));
    CHECK(s.stats.accepted > 0);
  }

  SUBCASE("trigonometric with dense output") {
    auto f = [](double t, const Eigen::VectorXd&) {
      Eigen::VectorXd dy(1);
      dy[0] = std::cos(t);
      return dy;
    };
    std::vector<double> ts;
    for (int i = 0; i <= 200; ++i) ts.push_back(10.0 * i / 200.0);
    ode::Samples s =
        ode::integrate_dopri5(f, Eigen::VectorXd::Zero(1), 0.0, 10.0, ts, opt);
    double worst = 0.0;
    for (size_t i = 0; i < ts.size(); ++i)
      worst = std::max(worst, std::abs(s.y[i][0] - std::sin(ts[i])));
    CHECK(worst < 1e-10);
  }

  SUBCASE("linear decay, max_step respected") {
    ode::Options o2 = opt;
    o2.max_step = 0.01;
    auto f = [](double, const Eigen::VectorXd& y) { return (-50.0 * y).eval(); };
    std::vector<double> ts{1.0};
    ode::Samples s = ode::integrate_dopri5(f, Eigen::VectorXd::Ones(1), 0.0, 1.0, ts, o2);
    CHECK(s.y[0][0] == doctest::Approx(std::exp(-50.0)).epsilon(1e-8));
    CHECK(s.stats.accepted >= 100);
  }
}

TEST_CASE("dopri5: validity guard forces breakdown at a finite-time zero") {
  // y' = -1/(2y) reaches 0 at t = 1 from y(0) = 1; positivity can't be kept
  auto f = [](double, const Eigen::VectorXd& y) {
    Eigen::VectorXd dy(1);
    dy[0] = -0.5 / y[0];
    return dy;
  };
  auto valid = [](const Eigen::VectorXd& y) { return y[0] > 0.0; };
  std::vector<double> ts{2.0};
  try {
    ode::integrate_dopri5(f, Eigen::VectorXd::Ones(1), 0.0, 2.0, ts, {}, valid);
    FAIL("expected Breakdown");
  } catch (const ode::Breakdown& b) {
    CHECK(b.t_last == doctest::Approx(1.0).epsilon(1e-3));
  }
}

TEST_CASE("dopri5: argument validation") {
  auto f = [](double, const Eigen::VectorXd& y) { return y; };
  Eigen::VectorXd y0 = Eigen::VectorXd::Ones(1);
  std::vector<double> bad{-0.5};
  CHECK_THROWS_AS(ode::integrate_dopri5(f, y0, 0.0, 1.0, bad, {}), std::invalid_argument);
  std::vector<double> unsorted{0.7, 0.3};
  CHECK_THROWS_AS(ode::integrate_dopri5(f, y0, 0.0, 1.0, unsorted, {}),
                  std::invalid_argument);
  std::vector<double> ok{1.0};
  CHECK_THROWS_AS(ode::integrate_dopri5(f, y0, 1.0, 1.0, ok, {}), std::invalid_argument);
}

TEST_CASE("flow right-hand sides agree with the curvature module") {
  Eigen::VectorXd g = random_diag_metric(5, 61).diag();
  CHECK((rhs_heisenberg_diag(2, g) + 2.0 * ricci_heisenberg_diag(2, g))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  Eigen::VectorXd gu = random_diag_metric(6, 62).diag();
  CHECK((rhs_unitriangular_diag(4, gu) + 2.0 * ricci_unitriangular_diag(4, gu))
            .cwiseAbs()
            .maxCoeff() == 0.0);

  // general path on a diagonal state: same diagonal, vanishing off-diagonal
  LieAlgebraSpec h = heisenberg(2);
  MetricState gd = MetricState::diagonal(g);
  Eigen::VectorXd lower = rhs_general_lower(h, gd.lower());
  Eigen::MatrixXd m = MetricState::lower_to_sym(5, lower);
  CHECK((m.diagonal() - rhs_heisenberg_diag(2, g)).cwiseAbs().maxCoeff() < 1e-13);
  Eigen::MatrixXd off = m;
  off.diagonal().setZero();
  CHECK(off.cwiseAbs().maxCoeff() < 1e-13);

  // non-positive-definite states answer NaN so the integrator rejects them
  Eigen::VectorXd badlower = gd.lower();
  badlower[0] = -1.0;
  CHECK(rhs_general_lower(h, badlower).hasNaN());
}

TEST_CASE("closed form on the three-dimensional group") {
  auto v = nil3_closed_form(1.0, 1.0, 1.0, 1.0);
  const double c = std::cbrt(4.0);
  CHECK(v[0] == doctest::Approx(c).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(c).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(1.0 / c).epsilon(1e-15));

  // t = 0 returns the initial data
  auto v0 = nil3_closed_form(2.0, 0.5, 1.25, 0.0);
  CHECK(v0[0] == doctest::Approx(2.0));
  CHECK(v0[1] == doctest::Approx(0.5));
  CHECK(v0[2] == doctest::Approx(1.25));

  // differentiating the closed form reproduces dg/dt = -2 Ric(g)
  const double t = 0.7, dt = 1e-6;
  auto p = nil3_closed_form(2.0, 0.5, 1.25, t + dt);
  auto m = nil3_closed_form(2.0, 0.5, 1.25, t - dt);
  auto c0 = nil3_closed_form(2.0, 0.5, 1.25, t);
  Eigen::VectorXd gt(3);
  gt << c0[0], c0[1], c0[2];
  Eigen::VectorXd rhs = rhs_heisenberg_diag(1, gt);
  for (int i = 0; i < 3; ++i)
    CHECK((p[i] - m[i]) / (2.0 * dt) == doctest::Approx(rhs[i]).epsilon(1e-8));

  CHECK_THROWS_AS(nil3_closed_form(0.0, 1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("integrated flow matches the closed form") {
  FlowProblem pb{heisenberg(1), MetricState::diagonal(Eigen::VectorXd::Ones(3))};
  pb.t1 = 1.0;
  pb.samples = 11;
  FlowTrajectory traj = integrate(pb);
  REQUIRE(traj.times.size() == 11);
  CHECK(traj.mode_used == RhsMode::heisenberg_diag);
  double worst = 0.0;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    auto exact = nil3_closed_form(1.0, 1.0, 1.0, traj.times[s]);
    for (int i = 0; i < 3; ++i)
      worst = std::max(worst, std::abs(traj.states[s].diag()[i] / exact[i] - 1.0));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("general mode reproduces the diagonal fast path") {
  Eigen::VectorXd d(3);
  d << 1.5, 0.8, 2.0;
  FlowProblem pb{heisenberg(1), MetricState::diagonal(d)};
  pb.t1 = 2.0;
  pb.samples = 5;

  FlowTrajectory fast = integrate(pb);
  pb.mode = RhsMode::general;
  FlowTrajectory gen = integrate(pb);
  CHECK(gen.mode_used == RhsMode::general);
  for (size_t s = 0; s < fast.times.size(); ++s) {
    Eigen::MatrixXd mg = gen.states[s].matrix();
    CHECK((mg.diagonal() - fast.states[s].diag()).cwiseAbs().maxCoeff() < 1e-8);
    Eigen::MatrixXd off = mg;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("full non-diagonal initial data stays symmetric positive definite") {
  LieAlgebraSpec h = heisenberg(1);
  MetricState g0 = random_full_metric(3, 77);
  FlowProblem pb{h, g0};
  pb.t1 = 5.0;
  pb.samples = 6;
  FlowTrajectory traj = integrate(pb);
  CHECK(traj.mode_used == RhsMode::general);
  for (const auto& st : traj.states) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(st.matrix());
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("mode resolution") {
  Eigen::VectorXd d3 = Eigen::VectorXd::Ones(3);
  FlowProblem pb{heisenberg(1), MetricState::diagonal(d3)};
  CHECK(resolve_mode(pb) == RhsMode::heisenberg_diag);

  // unitriangular(3) may be driven by either fast path
  FlowProblem pu{unitriangular(3), MetricState::diagonal(d3)};
  CHECK(resolve_mode(pu) == RhsMode::heisenberg_diag);
  pu.mode = RhsMode::unitriangular_diag;
  CHECK(resolve_mode(pu) == RhsMode::unitriangular_diag);

  FlowProblem p4{unitriangular(4), MetricState::diagonal(Eigen::VectorXd::Ones(6))};
  CHECK(resolve_mode(p4) == RhsMode::unitriangular_diag);
  p4.mode = RhsMode::heisenberg_diag;
  CHECK_THROWS_AS(resolve_mode(p4), std::invalid_argument);

  FlowProblem pf{heisenberg(1), random_full_metric(3, 9)};
  CHECK(resolve_mode(pf) == RhsMode::general);
  pf.mode = RhsMode::heisenberg_diag;
  CHECK_THROWS_AS(resolve_mode(pf), std::invalid_argument);
}

TEST_CASE("unitriangular(3) trajectories agree across fast paths") {
  Eigen::VectorXd d(3);
  d << 1.0, 2.0, 0.5;
  FlowProblem pa{unitriangular(3), MetricState::diagonal(d)};
  pa.t1 = 3.0;
  pa.samples = 7;
  pa.mode = RhsMode::heisenberg_diag;
  FlowProblem pb = pa;
  pb.mode = RhsMode::unitriangular_diag;
  FlowTrajectory ta = integrate(pa), tb = integrate(pb);
  for (size_t s = 0; s < ta.times.size(); ++s)
    CHECK((ta.states[s].diag() - tb.states[s].diag()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conserved quantities and the center lower bound") {
  const int n = 2;
  MetricState g0 = random_diag_metric(5, 404);
  FlowProblem pb{heisenberg(n), g0};
  pb.t1 = 10.0;
  pb.samples = 50;
  FlowTrajectory traj = integrate(pb);
  REQUIRE(traj.heisenberg_n == n);
  REQUIRE(traj.conserved.size() == traj.times.size());

  DriftReport drift = conserved_drift(traj);
  // drift accumulates like step-count x rtol; ~4x headroom over the observed value
  CHECK(drift.max_drift < 1e-9);

  // monotonicity and the closed-form bound on the center component
  const double gN0 = g0.diag()[2 * n];
  const double sig0 = sigma_heisenberg(n, g0.diag());
  for (size_t s = 0; s < traj.times.size(); ++s) {
    const Eigen::VectorXd& g = traj.states[s].diag();
    const double bound = 1.0 / (1.0 / gN0 + sig0 * traj.times[s]);
    CHECK(g[2 * n] >= bound * (1.0 - 1e-9));
    if (s > 0) {
      for (int i = 0; i < 2 * n; ++i) CHECK(g[i] > traj.states[s - 1].diag()[i]);
      CHECK(g[2 * n] < traj.states[s - 1].diag()[2 * n]);
    }
  }

  ConservedSet cs = ConservedSet::heisenberg(n, g0.diag());
  CHECK(cs.A[0] == doctest::Approx(g0.diag()[0] / g0.diag()[2]));
  CHECK(cs.B[1] == doctest::Approx(g0.diag()[3] / g0.diag()[1]));
  CHECK(cs.C1 == doctest::Approx(g0.diag()[0] * g0.diag()[1] * g0.diag()[4]));
  CHECK(cs.C == doctest::Approx(cs.C1 * cs.C2));

  FlowTrajectory gen = traj;
  gen.conserved.clear();
  CHECK_THROWS_AS(conserved_drift(gen), std::invalid_argument);
}

TEST_CASE("problem validation") {
  FlowProblem pb{heisenberg(1), MetricState::diagonal(Eigen::VectorXd::Ones(3))};
  pb.t1 = 0.0;
  CHECK_THROWS_AS(integrate(pb), std::invalid_argument);
  pb.t1 = 1.0;
  pb.samples = 1;
  CHECK_THROWS_AS(integrate(pb), std::invalid_argument);
  pb.samples = 10;
  pb.log_spaced = true;
  CHECK_THROWS_AS(integrate(pb), std::invalid_argument);  // t0 = 0
  pb.t0 = 0.5;
  pb.t1 = 2.0;
  FlowTrajectory traj = integrate(pb);
  CHECK(traj.times.front() == 0.5);
  CHECK(traj.times.back() == 2.0);

  FlowProblem bad{heisenberg(1), MetricState::diagonal(Eigen::VectorXd::Ones(5))};
  CHECK_THROWS_AS(integrate(bad), std::invalid_argument);
}

TEST_CASE("explicit sample times override the grid") {
  FlowProblem pb{heisenberg(1), MetricState::diagonal(Eigen::VectorXd::Ones(3))};
  pb.t1 = 4.0;
  pb.sample_times = {0.0, 0.1, 3.9, 4.0};
  FlowTrajectory traj = integrate(pb);
  REQUIRE(traj.times.size() == 4);
  CHECK(traj.times[2] == 3.9);
  auto exact = nil3_closed_form(1.0, 1.0, 1.0, 3.9);
  CHECK(traj.states[2].diag()[0] == doctest::Approx(exact[0]).epsilon(1e-9));
}
