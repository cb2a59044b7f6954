#include "nilflow/ode.hpp"

#include <algorithm>
#include <cmath>

namespace nilflow::ode {

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// embedded error weights (5th minus 4th order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension (order 4)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// step-size controller constants
constexpr double kSafe = 0.9, kBeta = 0.04, kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kMaxShrink = 5.0, kMaxGrow = 0.1;  // h/fac with fac in [kMaxGrow, kMaxShrink]

double error_norm(const Eigen::VectorXd& e, const Eigen::VectorXd& y0,
                  const Eigen::VectorXd& y1, double rtol, double atol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < e.size(); ++i) {
    double sk = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    double q = e[i] / sk;
    acc += q * q;
  }
  return std::sqrt(acc / static_cast<double>(e.size()));
}

double initial_step(const Rhs& f, double t0, const Eigen::VectorXd& y0,
                    const Eigen::VectorXd& f0, double span, const Options& opt) {
  const Eigen::Index n = y0.size();
  double dnf = 0.0, dny = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    double sk = opt.atol + opt.rtol * std::abs(y0[i]);
    dnf += (f0[i] / sk) * (f0[i] / sk);
    dny += (y0[i] / sk) * (y0[i] / sk);
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min({h, span, opt.max_step});
  Eigen::VectorXd f1 = f(t0 + h, y0 + h * f0);
  double h1;
  if (f1.allFinite()) {
    double der2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double sk = opt.atol + opt.rtol * std::abs(y0[i]);
      double q = (f1[i] - f0[i]) / sk;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    double der12 = std::max(der2, std::sqrt(dnf));
    h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  } else {
    h1 = h * 1e-2;  // probe left the admissible set; start cautiously
  }
  return std::min({100.0 * h, h1, span, opt.max_step});
}

}  // namespace

Samples integrate_dopri5(const Rhs& f, const Eigen::VectorXd& y0, double t0, double t1,
                         std::span<const double> sample_times, const Options& opt,
                         const Validity& valid) {
  const double span = t1 - t0;
  if (!(span > 0.0)) throw std::invalid_argument("integrate_dopri5: requires t1 > t0");
  const double hmin = 1e-14 * span;
  const double tiny = 1e-12 * span;
  for (size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 - tiny || sample_times[i] > t1 + tiny)
      throw std::invalid_argument("integrate_dopri5: sample time outside [t0, t1]");
    if (i > 0 && sample_times[i] < sample_times[i - 1])
      throw std::invalid_argument("integrate_dopri5: sample times must be sorted");
  }

  Samples out;
  out.t.reserve(sample_times.size());
  out.y.reserve(sample_times.size());
  size_t cursor = 0;
  auto emit = [&](double s, const Eigen::VectorXd& ys) {
    out.t.push_back(s);
    out.y.push_back(ys);
    ++cursor;
  };

  Eigen::VectorXd y = y0;
  double t = t0;
  if (valid && !valid(y)) throw Breakdown("initial state is not admissible", t0);
  while (cursor < sample_times.size() && sample_times[cursor] <= t0 + tiny)
    emit(sample_times[cursor], y);

  Eigen::VectorXd k1 = f(t, y);
  if (!k1.allFinite()) throw Breakdown("right-hand side not finite at the initial state", t0);
  double h = opt.initial_step > 0.0 ? std::min({opt.initial_step, span, opt.max_step})
                                    : initial_step(f, t0, y, k1, span, opt);
  double facold = 1e-4;

  Eigen::VectorXd k2, k3, k4, k5, k6, k7, y5, err_vec;
  while (t < t1 - tiny) {
    bool last = false;
    if (t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    if (h < hmin) throw Breakdown("step size underflow", t);

    k2 = f(t + c2 * h, y + h * (a21 * k1));
    k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
    k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    y5 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    k7 = f(t + h, y5);
    err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    double err = y5.allFinite() && err_vec.allFinite()
                     ? error_norm(err_vec, y, y5, opt.rtol, opt.atol)
                     : std::numeric_limits<double>::quiet_NaN();

    if (!(err <= 1.0)) {  // rejected (or non-finite)
      ++out.stats.rejected;
      h = std::isfinite(err) ? h / std::min(kMaxShrink, std::pow(err, kExpo1) / kSafe)
                             : 0.5 * h;
      if (h < hmin) throw Breakdown("step size underflow after rejection", t);
      continue;
    }
    if (valid && !valid(y5)) {  // error passed but state left the admissible set
      ++out.stats.rejected;
      h *= 0.5;
      if (h < hmin) throw Breakdown("state left the admissible set", t);
      continue;
    }

    ++out.stats.accepted;
    if (cursor < sample_times.size() && sample_times[cursor] <= t + h + tiny) {
      Eigen::VectorXd ydiff = y5 - y;
      Eigen::VectorXd bspl = h * k1 - ydiff;
      Eigen::VectorXd r4 = ydiff - h * k7 - bspl;
      Eigen::VectorXd r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      while (cursor < sample_times.size() && sample_times[cursor] <= t + h + tiny) {
        double s = sample_times[cursor];
        double th = std::clamp((s - t) / h, 0.0, 1.0);
        double th1 = 1.0 - th;
        emit(s, y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
      }
    }

    double fac = std::pow(err, kExpo1) / std::pow(facold, kBeta);  // Lund stabilization
    fac = std::clamp(fac / kSafe, kMaxGrow, kMaxShrink);
    facold = std::max(err, 1e-4);
    t += h;
    y.swap(y5);
    k1.swap(k7);
    if (last || t >= t1 - tiny) break;
    h = std::min(h / fac, opt.max_step);
  }

  while (cursor < sample_times.size()) emit(sample_times[cursor], y);
  return out;
}

}  // namespace nilflow::ode
