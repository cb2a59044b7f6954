#include "nilflow/experiment.hpp"

#include "nilflow/rng.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace nilflow {

namespace {

using io::json;

std::vector<double> geomspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < count; ++i) v[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

/// Sup deviation normalized by the largest component of either vector; exact
/// zeros on both sides contribute nothing, so entries that vanish by symmetry
/// do not blow up the quotient.
double normalized_dev(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double scale = std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  if (scale == 0.0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

std::pair<json, bool> run_nil3_reference(const json& cfg) {
  const auto g0 = cfg.at("g0").get<std::vector<double>>();
  if (g0.size() != 3) throw std::invalid_argument("nil3_reference: g0 needs 3 entries");
  FlowProblem pb{heisenberg(1), MetricState::diagonal(Eigen::Map<const Eigen::VectorXd>(
                                    g0.data(), 3))};
  pb.t1 = cfg.at("t1").get<double>();
  pb.rtol = cfg.at("rtol").get<double>();
  pb.atol = cfg.at("atol").get<double>();
  pb.samples = cfg.at("samples").get<int>();
  FlowTrajectory traj = integrate(pb);

  double max_rel = 0.0;
  for (size_t s = 0; s < traj.times.size(); ++s) {
    auto exact = nil3_closed_form(g0[0], g0[1], g0[2], traj.times[s]);
    const Eigen::VectorXd& g = traj.states[s].diag();
    for (int c = 0; c < 3; ++c)
      max_rel = std::max(max_rel, std::abs(g[c] / exact[c] - 1.0));
  }
  auto exact1 = nil3_closed_form(g0[0], g0[1], g0[2], pb.t1);
  json res;
  res["max_rel_error"] = max_rel;
  res["final_state"] = to_vec(traj.states.back().diag());
  res["final_closed_form"] = std::vector<double>{exact1[0], exact1[1], exact1[2]};
  res["accepted"] = traj.stats.accepted;
  res["rejected"] = traj.stats.rejected;
  return {res, max_rel < 1e-6};
}

std::pair<json, bool> run_oracle_equivalence(const json& cfg) {
  const int trials = cfg.at("trials").get<int>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  struct Fam {
    const char* kind;
    int n;
  };
  std::vector<Fam> fams;
  for (int n : cfg.at("heisenberg_n").get<std::vector<int>>()) fams.push_back({"heisenberg", n});
  for (int n : cfg.at("unitriangular_n").get<std::vector<int>>())
    fams.push_back({"unitriangular", n});

  json per = json::array();
  double worst_dev = 0.0, worst_off = 0.0;
  std::uint64_t stream = seed;
  for (const auto& fam : fams) {
    const bool heis = std::string(fam.kind) == "heisenberg";
    LieAlgebraSpec spec = heis ? heisenberg(fam.n) : unitriangular(fam.n);
    double dev = 0.0, off = 0.0;
    for (int t = 0; t < trials; ++t) {
      MetricState g = random_diag_metric(spec.dim(), ++stream);
      Eigen::VectorXd closed = heis ? ricci_heisenberg_diag(fam.n, g.diag())
                                    : ricci_unitriangular_diag(fam.n, g.diag());
      Eigen::MatrixXd R = ricci_general(spec, g);
      dev = std::max(dev, normalized_dev(R.diagonal(), closed));
      Eigen::MatrixXd offpart = R;
      offpart.diagonal().setZero();
      off = std::max(off, offpart.cwiseAbs().maxCoeff());
    }
    per.push_back({{"family", fam.kind},
                   {"n", fam.n},
                   {"dim", spec.dim()},
                   {"max_normalized_dev", dev},
                   {"max_offdiag", off}});
    worst_dev = std::max(worst_dev, dev);
    worst_off = std::max(worst_off, off);
  }
  json res;
  res["families"] = std::move(per);
  res["max_normalized_dev"] = worst_dev;
  res["max_offdiag"] = worst_off;
  return {res, worst_dev < 1e-12 && worst_off < 1e-13};
}

std::pair<json, bool> run_ricci_diag_sweep(const json& cfg) {
  const int n = cfg.at("n").get<int>();
  const int points = cfg.at("points").get<int>();
  const double lo = cfg.at("lo").get<double>(), hi = cfg.at("hi").get<double>();
  LieAlgebraSpec spec = heisenberg(n);
  const int dim = spec.dim();
  int comp = cfg.at("component").get<int>();  // 1-based; 0 means the center
  if (comp == 0) comp = dim;
  if (comp < 1 || comp > dim) throw std::invalid_argument("ricci_diag_sweep: bad component");

  std::vector<double> values = geomspace(lo, hi, points), scal(points);
  double max_dev = 0.0;
  bool all_negative = true;
  for (int p = 0; p < points; ++p) {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(dim);
    d[comp - 1] = values[p];
    MetricState g = MetricState::diagonal(d);
    const double s = scalar_curvature(spec, g);
    const double closed = -0.5 * d[dim - 1] * sigma_heisenberg(n, d);
    scal[p] = s;
    max_dev = std::max(max_dev, std::abs(s - closed) / std::abs(closed));
    all_negative = all_negative && s < 0.0;
  }
  json res;
  res["values"] = values;
  res["scalar"] = scal;
  res["max_dev_vs_closed_form"] = max_dev;
  res["all_negative"] = all_negative;
  return {res, all_negative && max_dev < 1e-12};
}

std::pair<json, bool> run_heisenberg_asymptotics(const json& cfg) {
  const int n = cfg.at("n").get<int>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const double t1 = cfg.at("t1").get<double>();
  const double t_lo = cfg.at("t_lo").get<double>();

  MetricState g0 = random_diag_metric(2 * n + 1, seed);
  FlowProblem pb{heisenberg(n), g0};
  pb.t1 = t1;
  pb.rtol = cfg.at("rtol").get<double>();
  pb.atol = cfg.at("atol").get<double>();
  pb.sample_times.push_back(0.0);
  for (double t : geomspace(1.0, t1, 61)) pb.sample_times.push_back(t);

  FlowTrajectory traj = integrate(pb);
  AsymptoticProfile prof = predict(n, g0.diag());
  RatioReport rep = ratio_convergence(traj, prof, t_lo, t1);
  DriftReport drift = conserved_drift(traj);

  json res;
  res["g0"] = to_vec(g0.diag());
  res["gamma"] = to_vec(prof.gamma);
  res["exponents"] = to_vec(prof.exponents);
  res["sup_dev"] = to_vec(rep.sup_dev);
  res["start_dev"] = to_vec(rep.start_dev);
  res["end_dev"] = to_vec(rep.end_dev);
  res["max_start"] = rep.max_start;
  res["max_end"] = rep.max_end;
  res["t_start"] = rep.t_start;
  res["t_end"] = rep.t_end;
  res["conserved_max_drift"] = drift.max_drift;
  res["accepted"] = traj.stats.accepted;
  const bool pass = rep.max_end < 0.02 && rep.max_end <= rep.max_start;
  return {res, pass};
}

std::pair<json, bool> run_heisenberg_soliton(const json& cfg) {
  const int n = cfg.at("n").get<int>();
  const std::uint64_t seed = cfg.at("seed").get<std::uint64_t>();
  const double t = cfg.at("t").get<double>();

  MetricState g0 = random_diag_metric(2 * n + 1, seed);
  AsymptoticProfile prof = predict(n, g0.diag());
  MetricState lim = blowdown_limit(prof, t);
  MetricState sol = soliton_heisenberg(n, t);
  const double dev_blowdown = normalized_dev(lim.diag(), sol.diag());

  const double eta_res =
      ScalingDiffeo::eta_heisenberg(n).automorphism_residual(heisenberg(n));

  double rhs_dev = 0.0;
  for (double tt : {0.5, 1.0, 2.0, 10.0}) {
    Eigen::VectorXd rhs = -2.0 * ricci_heisenberg_diag(n, soliton_heisenberg(n, tt).diag());
    rhs_dev = std::max(rhs_dev, normalized_dev(rhs, soliton_heisenberg_ddt(n, tt)));
  }

  SolitonCertificate cert = lauret_certify(heisenberg(n), sol);
  json res;
  res["blowdown_dev_vs_soliton"] = dev_blowdown;
  res["eta_automorphism_residual"] = eta_res;
  res["rhs_dev"] = rhs_dev;
  res["certificate"] = io::certificate_to_json(cert);
  const double c_expect = -0.5 / t;
  const bool pass = dev_blowdown < 1e-12 && eta_res == 0.0 && rhs_dev < 1e-12 &&
                    cert.valid(1e-10) && std::abs(cert.c - c_expect) < 1e-10;
  return {res, pass};
}

std::pair<json, bool> run_ut_soliton(const json& cfg) {
  const int n = cfg.at("n").get<int>();
  const double A = cfg.at("A").get<double>();
  LieAlgebraSpec spec = unitriangular(n);

  double rhs_dev = 0.0;
  for (double tt : cfg.at("t_list").get<std::vector<double>>()) {
    Eigen::VectorXd rhs =
        -2.0 * ricci_unitriangular_diag(n, soliton_unitriangular(n, tt, A).diag());
    rhs_dev = std::max(rhs_dev, normalized_dev(rhs, soliton_unitriangular_ddt(n, tt, A)));
  }
  const double eta_res = ScalingDiffeo::eta_unitriangular(n).automorphism_residual(spec);
  SolitonCertificate cert = lauret_certify(spec, soliton_unitriangular(n, 1.0, A));

  json res;
  res["rhs_dev"] = rhs_dev;
  res["eta_automorphism_residual"] = eta_res;
  res["certificate"] = io::certificate_to_json(cert);
  const bool pass = rhs_dev < 1e-12 && eta_res < 1e-15 && cert.valid(1e-10) &&
                    std::abs(cert.c + 0.5) < 1e-10;
  return {res, pass};
}

json defaults_for(const std::string& name) {
  if (name == "nil3_reference")
    return {{"g0", {1.0, 1.0, 1.0}}, {"t1", 1.0}, {"rtol", 1e-10}, {"atol", 1e-12},
            {"samples", 33}};
  if (name == "oracle_equivalence")
    return {{"trials", 100},
            {"seed", 1},
            {"heisenberg_n", {1, 2, 3, 4}},
            {"unitriangular_n", {3, 4, 5, 6}}};
  if (name == "ricci_diag_sweep")
    return {{"n", 1}, {"points", 25}, {"lo", 0.1}, {"hi", 10.0}, {"component", 0}};
  if (name == "heisenberg_asymptotics")
    return {{"n", 1}, {"seed", 1}, {"t1", 1e6}, {"t_lo", 1e4}, {"rtol", 1e-10},
            {"atol", 1e-12}};
  if (name == "heisenberg_soliton") return {{"n", 1}, {"seed", 1}, {"t", 1.0}};
  if (name == "ut_soliton")
    return {{"n", 3}, {"A", 1.0}, {"t_list", {0.5, 1.0, 2.0, 10.0}}};
  throw std::invalid_argument("unknown experiment: " + name);
}

}  // namespace

io::json run_experiment(const io::json& config) {
  const auto start = std::chrono::steady_clock::now();
  const std::string name = config.at("experiment").get<std::string>();
  json merged = defaults_for(name);
  for (const auto& [k, v] : config.items())
    if (k != "experiment") merged[k] = v;

  std::pair<json, bool> out;
  if (name == "nil3_reference") out = run_nil3_reference(merged);
  else if (name == "oracle_equivalence") out = run_oracle_equivalence(merged);
  else if (name == "ricci_diag_sweep") out = run_ricci_diag_sweep(merged);
  else if (name == "heisenberg_asymptotics") out = run_heisenberg_asymptotics(merged);
  else if (name == "heisenberg_soliton") out = run_heisenberg_soliton(merged);
  else out = run_ut_soliton(merged);

  json report;
  report["experiment"] = name;
  report["tool_version"] = kToolVersion;
  report["inputs"] = std::move(merged);
  report["results"] = std::move(out.first);
  report["pass"] = out.second;
  report["wall_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace nilflow
