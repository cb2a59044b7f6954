#include "nilflow/asymptotics.hpp"

#include "doctest.h"
#include "nilflow/rng.hpp"
#include "nilflow/soliton.hpp"

#include <cmath>

using namespace nilflow;

namespace {

FlowProblem heis_problem(int n, const Eigen::VectorXd& g0, double t0, double t1) {
  FlowProblem pb{heisenberg(n), MetricState::diagonal(g0)};
  pb.t0 = t0;
  pb.t1 = t1;
  return pb;
}

}  // namespace

TEST_CASE("profile for the unit metric on heisenberg(1)") {
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  AsymptoticProfile p = predict(1, ones);
  const double c3 = std::cbrt(3.0);
  CHECK(p.n == 1);
  CHECK(p.C == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(p.gamma[0] == doctest::Approx(c3).epsilon(1e-15));
  CHECK(p.gamma[1] == doctest::Approx(c3).epsilon(1e-15));
  CHECK(p.gamma[2] == doctest::Approx(1.0 / c3).epsilon(1e-15));
  CHECK(p.exponents[0] == 1.0 / 3.0);
  CHECK(p.exponents[1] == 1.0 / 3.0);
  CHECK(p.exponents[2] == -1.0 / 3.0);
  CHECK(p.value(0, 8.0) == doctest::Approx(c3 * 2.0).epsilon(1e-14));
  CHECK(p.value(2, 8.0) == doctest::Approx(1.0 / (c3 * 2.0)).epsilon(1e-14));
}

TEST_CASE("profile components for generic data, n = 2") {
  Eigen::VectorXd g0(5);
  g0 << 2.0, 3.0, 5.0, 7.0, 11.0;
  AsymptoticProfile p = predict(2, g0);
  const double C = 2.0 * 3.0 * 5.0 * 7.0 * 121.0;
  CHECK(p.C == doctest::Approx(C).epsilon(1e-15));
  CHECK(p.A[0] == doctest::Approx(2.0 / 5.0));
  CHECK(p.A[1] == doctest::Approx(3.0 / 7.0));
  CHECK(p.B[0] == doctest::Approx(5.0 / 2.0));
  CHECK(p.B[1] == doctest::Approx(7.0 / 3.0));
  const double front = std::pow(4.0, 0.25);
  const double croot = std::pow(C, 1.0 / 8.0);
  CHECK(p.gamma[0] == doctest::Approx(front * std::sqrt(0.4) * croot).epsilon(1e-14));
  CHECK(p.gamma[3] == doctest::Approx(front * std::sqrt(7.0 / 3.0) * croot).epsilon(1e-14));
  CHECK(p.gamma[4] == doctest::Approx(std::pow(4.0, -0.5) * std::pow(C, 0.25)).epsilon(1e-14));
  for (int i = 0; i < 4; ++i) CHECK(p.exponents[i] == 0.25);
  CHECK(p.exponents[4] == -0.5);
}

TEST_CASE("profile reproduces the conserved products") {
  // gamma_1..gamma_n gamma_N = C1 and gamma_{n+1}..gamma_{2n} gamma_N = C2:
  // the power-law metric carries the same flow invariants as the initial data.
  for (int n : {1, 2, 3}) {
    for (std::uint64_t seed : {11u, 12u, 13u}) {
      Eigen::VectorXd g0 = random_diag_metric(2 * n + 1, seed).diag();
      AsymptoticProfile p = predict(n, g0);
      ConservedSet cons = ConservedSet::heisenberg(n, g0);
      double p1 = p.gamma[2 * n];
      double p2 = p.gamma[2 * n];
      for (int i = 0; i < n; ++i) {
        p1 *= p.gamma[i];
        p2 *= p.gamma[i + n];
      }
      CHECK(p1 == doctest::Approx(cons.C1).epsilon(1e-12));
      CHECK(p2 == doctest::Approx(cons.C2).epsilon(1e-12));
      // exponents of the two products cancel exactly
      double e1 = p.exponents[2 * n];
      for (int i = 0; i < n; ++i) e1 += p.exponents[i];
      CHECK(std::abs(e1) < 1e-15);
    }
  }
}

TEST_CASE("profile input validation") {
  Eigen::VectorXd g3 = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(predict(0, g3), std::domain_error);
  CHECK_THROWS_AS(predict(2, g3), std::invalid_argument);
  Eigen::VectorXd bad = g3;
  bad[1] = -1.0;
  CHECK_THROWS_AS(predict(1, bad), std::invalid_argument);
}

TEST_CASE("flow from a soliton matches its own profile to integrator accuracy") {
  for (int n : {1, 2}) {
    MetricState s1 = soliton_heisenberg(n, 1.0);
    FlowProblem pb = heis_problem(n, s1.diag(), 1.0, 100.0);
    pb.samples = 25;
    pb.log_spaced = true;
    FlowTrajectory traj = integrate(pb);
    AsymptoticProfile p = predict(n, s1.diag());
    RatioReport rep = ratio_convergence(traj, p, 1.0, 100.0);
    // the soliton is exactly self-similar, so the only deviation is ODE error
    CHECK(rep.max_start < 1e-13);
    CHECK(rep.max_sup < 1e-6);
    CHECK(rep.t_start == doctest::Approx(1.0));
    CHECK(rep.t_end == doctest::Approx(100.0));
  }
}

TEST_CASE("generic initial data converges onto the predicted power law") {
  Eigen::VectorXd g0(3);
  g0 << 2.0, 0.5, 1.3;
  FlowProblem pb = heis_problem(1, g0, 0.0, 1e5);
  pb.sample_times = {0.0, 1.0, 10.0, 100.0, 1e3, 1e4, 1e5};
  FlowTrajectory traj = integrate(pb);
  AsymptoticProfile p = predict(1, g0);
  RatioReport late = ratio_convergence(traj, p, 1e3, 1e5);
  CHECK(late.max_end < 1e-3);
  CHECK(late.max_end < late.max_start);
  RatioReport early = ratio_convergence(traj, p, 1.0, 1e5);
  CHECK(early.max_end == doctest::Approx(late.max_end));
  CHECK(early.max_start > late.max_start);  // deviation decays along the flow
  CHECK(early.sup_dev.maxCoeff() == doctest::Approx(early.start_dev.maxCoeff()));
}

TEST_CASE("ratio report argument validation") {
  Eigen::VectorXd g0 = Eigen::VectorXd::Ones(3);
  FlowProblem pb = heis_problem(1, g0, 1.0, 10.0);
  pb.samples = 5;
  FlowTrajectory traj = integrate(pb);
  AsymptoticProfile p = predict(1, g0);
  CHECK_THROWS_AS(ratio_convergence(traj, p, 0.0, 10.0), std::invalid_argument);
  CHECK_THROWS_AS(ratio_convergence(traj, p, 5.0, 5.0), std::invalid_argument);
  // window inside [t0, t1] but missing every sample
  CHECK_THROWS_AS(ratio_convergence(traj, p, 3.3, 3.4), std::invalid_argument);
  // profile size mismatch
  AsymptoticProfile p2 = predict(2, Eigen::VectorXd::Ones(5));
  CHECK_THROWS_AS(ratio_convergence(traj, p2, 1.0, 10.0), std::invalid_argument);
  // trajectory without a conserved ledger
  FlowTrajectory bare;
  bare.times = {1.0, 2.0};
  bare.states = {MetricState::diagonal(g0), MetricState::diagonal(g0)};
  CHECK_THROWS_AS(ratio_convergence(bare, p, 1.0, 2.0), std::invalid_argument);
}

TEST_CASE("comparison harness: unperturbed slopes give ratio one") {
  double r = comparison_lemma_check(-0.4, [](double) { return 0.0; }, 50.0);
  CHECK(std::abs(r - 1.0) < 1e-12);
}

TEST_CASE("comparison harness: integrable perturbation, closed-form ratio") {
  // u = 1 + c t, v = 1 + c t + c (1 - 1/(1+t)) for eps(t) = (1+t)^{-2}
  auto eps = [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); };
  for (double c : {-0.7, 0.3}) {
    for (double tf : {10.0, 1e4}) {
      double r = comparison_lemma_check(c, eps, tf);
      double u = 1.0 + c * tf;
      double v = u + c * (1.0 - 1.0 / (1.0 + tf));
      CHECK(r == doctest::Approx(u / v).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(comparison_lemma_check(1.0, [](double) { return 0.0; }, 0.0),
                  std::invalid_argument);
}
