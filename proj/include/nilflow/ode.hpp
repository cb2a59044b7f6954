#pragma once

#include <Eigen/Core>

#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace nilflow::ode {

/// Integration could not continue (step size underflow, typically because the
/// state left the admissible set and halving never recovered). Carries the
/// last time with a valid accepted state.
struct Breakdown : std::runtime_error {
  Breakdown(const std::string& msg, double t) : std::runtime_error(msg), t_last(t) {}
  double t_last;
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 = automatic
};

struct Stats {
  long accepted = 0;
  long rejected = 0;
};

struct Samples {
  std::vector<double> t;
  std::vector<Eigen::VectorXd> y;
  Stats stats;
};

using Rhs = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;
using Validity = std::function<bool(const Eigen::VectorXd&)>;

/// Dormand-Prince 5(4) with PI step-size control and the standard 4th-order
/// continuous extension (used to evaluate the solution at sample_times, which
/// must be sorted and lie in [t0, t1]).
///
/// A step whose error estimate passes but whose endpoint fails `valid` is
/// retried at half the step; a non-finite error estimate is handled the same
/// way. Steps below 1e-14 * (t1 - t0) raise Breakdown.
Samples integrate_dopri5(const Rhs& f, const Eigen::VectorXd& y0, double t0, double t1,
                         std::span<const double> sample_times, const Options& opt = {},
                         const Validity& valid = {});

}  // namespace nilflow::ode
