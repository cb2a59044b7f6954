#include "nilflow/experiment.hpp"
#include "nilflow/rng.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

namespace {

using nilflow::io::json;

// Bare filenames land in NILFLOW_OUT_DIR when it is set; paths with a
// directory component are taken as given.
std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.has_parent_path()) return path;
  const char* dir = std::getenv("NILFLOW_OUT_DIR");
  if (!dir || !*dir) return path;
  return (std::filesystem::path(dir) / p).string();
}

void emit_json(const json& j, const std::string& out) {
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    nilflow::io::write_json_file(resolve_out(out), j);
}

nilflow::LieAlgebraSpec load_algebra(const std::string& path) {
  return nilflow::io::algebra_from_json(nilflow::io::read_json_file(path));
}

nilflow::MetricState load_metric(const std::string& path) {
  return nilflow::io::metric_from_json(nilflow::io::read_json_file(path));
}

nilflow::LieAlgebraSpec make_family(const std::string& family, int n) {
  if (family == "heisenberg") return nilflow::heisenberg(n);
  if (family == "unitriangular") return nilflow::unitriangular(n);
  throw CLI::ValidationError("--family must be heisenberg or unitriangular");
}

std::vector<std::pair<int, int>> parse_planes(const std::string& s) {
  // "1,2;1,3" -> {(0,1),(0,2)}
  std::vector<std::pair<int, int>> planes;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t semi = s.find(';', pos);
    std::string part = s.substr(pos, semi == std::string::npos ? semi : semi - pos);
    size_t comma = part.find(',');
    if (comma == std::string::npos)
      throw CLI::ValidationError("--sectional expects \"i,j[;i,j...]\"");
    planes.emplace_back(std::stoi(part.substr(0, comma)) - 1,
                        std::stoi(part.substr(comma + 1)) - 1);
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  return planes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"left-invariant curvature and Ricci flow on nilpotent Lie groups"};
  app.require_subcommand(1);

  // algebra gen / algebra validate
  auto* alg = app.add_subcommand("algebra", "generate or validate structure constants");
  alg->require_subcommand(1);

  std::string family = "heisenberg", out, in_path;
  int n = 1;
  auto* gen = alg->add_subcommand("gen", "write a generated family to JSON");
  gen->add_option("--family", family, "heisenberg | unitriangular")->required();
  gen->add_option("--n", n, "family parameter")->required();
  gen->add_option("--out", out, "output file (default: stdout)");

  auto* val = alg->add_subcommand("validate", "Jacobi + nilpotency report");
  val->add_option("--in", in_path, "algebra JSON")->required();
  val->add_option("--out", out, "output file (default: stdout)");

  // curvature
  std::string metric_path, sectional_arg;
  bool with_riemann = false;
  auto* curv = app.add_subcommand("curvature", "curvature of one left-invariant metric");
  curv->add_option("--algebra", in_path, "algebra JSON")->required();
  curv->add_option("--metric", metric_path, "metric JSON")->required();
  curv->add_flag("--riemann", with_riemann, "include the (4,0) tensor");
  curv->add_option("--sectional", sectional_arg, "basis planes, e.g. \"1,2;1,3\"");
  curv->add_option("--out", out, "output file (default: stdout)");

  // flow
  double t0 = 0.0, t1 = 1.0, rtol = 1e-10, atol = 1e-12;
  int samples = 100;
  bool log_spaced = false;
  std::string mode = "auto";
  auto* flow = app.add_subcommand("flow", "integrate dg/dt = -2 Ric(g)");
  flow->add_option("--algebra", in_path, "algebra JSON")->required();
  flow->add_option("--metric", metric_path, "initial metric JSON")->required();
  flow->add_option("--t0", t0, "start time");
  flow->add_option("--t1", t1, "end time")->required();
  flow->add_option("--rtol", rtol, "relative tolerance");
  flow->add_option("--atol", atol, "absolute tolerance");
  flow->add_option("--samples", samples, "number of output samples");
  flow->add_flag("--log-spaced", log_spaced, "log-spaced samples (needs t0 > 0)");
  flow->add_option("--mode", mode, "auto | general | heisenberg | unitriangular");
  flow->add_option("--out", out, "output file; .csv selects CSV, else JSON");

  // asymptotics
  int asy_n = 1;
  std::uint64_t seed = 1;
  double t_lo = 1e4;
  auto* asy = app.add_subcommand("asymptotics",
                                 "power-law profile vs integrated Heisenberg flow");
  asy->add_option("--n", asy_n, "Heisenberg parameter")->required();
  asy->add_option("--metric", metric_path, "initial diagonal metric JSON");
  asy->add_option("--seed", seed, "random initial metric when --metric is absent");
  asy->add_option("--t1", t1, "end time")->capture_default_str();
  asy->add_option("--t-lo", t_lo, "window start")->capture_default_str();
  asy->add_option("--rtol", rtol, "relative tolerance");
  asy->add_option("--out", out, "output file (default: stdout)");

  // soliton make / certify
  auto* sol = app.add_subcommand("soliton", "soliton metrics and certificates");
  sol->require_subcommand(1);
  double sol_t = 1.0, sol_A = 1.0, tol = 1e-10;
  auto* make = sol->add_subcommand("make", "write the soliton metric at time t");
  make->add_option("--family", family, "heisenberg | unitriangular")->required();
  make->add_option("--n", n, "family parameter")->required();
  make->add_option("--t", sol_t, "time")->capture_default_str();
  make->add_option("--A", sol_A, "scale parameter (unitriangular only)");
  make->add_option("--out", out, "output file (default: stdout)");

  auto* cert = sol->add_subcommand("certify", "Ric_endo = c Id + derivation witness");
  cert->add_option("--algebra", in_path, "algebra JSON")->required();
  cert->add_option("--metric", metric_path, "metric JSON")->required();
  cert->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  cert->add_option("--out", out, "output file (default: stdout)");

  // experiment
  std::string exp_name, config_path;
  auto* exp = app.add_subcommand("experiment", "named end-to-end run with pass/fail");
  exp->add_option("--name", exp_name, "experiment name")->required();
  exp->add_option("--config", config_path, "JSON with parameter overrides");
  exp->add_option("--out", out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);  // prints help or the usage message
    return rc == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      emit_json(nilflow::io::algebra_to_json(make_family(family, n)), out);
      return 0;
    }
    if (val->parsed()) {
      auto spec = load_algebra(in_path);
      auto rep = nilflow::validate(spec);
      json j{{"dim", spec.dim()},
             {"jacobi_residual", rep.jacobi_residual},
             {"jacobi_ok", rep.jacobi_ok()},
             {"nilpotent", rep.nilpotent},
             {"nilpotency_step", rep.nilpotency_step},
             {"pass", rep.pass()}};
      emit_json(j, out);
      return rep.pass() ? 0 : 1;
    }
    if (curv->parsed()) {
      auto spec = load_algebra(in_path);
      auto g = load_metric(metric_path);
      nilflow::CurvatureOptions opts;
      opts.with_riemann = with_riemann;
      if (!sectional_arg.empty()) opts.sectional_planes = parse_planes(sectional_arg);
      emit_json(nilflow::io::bundle_to_json(spec, nilflow::curvature_bundle(spec, g, opts)),
                out);
      return 0;
    }
    if (flow->parsed()) {
      nilflow::FlowProblem pb{load_algebra(in_path), load_metric(metric_path)};
      pb.t0 = t0;
      pb.t1 = t1;
      pb.rtol = rtol;
      pb.atol = atol;
      pb.samples = samples;
      pb.log_spaced = log_spaced;
      if (mode == "general") pb.mode = nilflow::RhsMode::general;
      else if (mode == "heisenberg") pb.mode = nilflow::RhsMode::heisenberg_diag;
      else if (mode == "unitriangular") pb.mode = nilflow::RhsMode::unitriangular_diag;
      else if (mode != "auto") throw CLI::ValidationError("--mode: unknown value " + mode);
      auto traj = nilflow::integrate(pb);
      if (!out.empty() && out.size() > 4 && out.substr(out.size() - 4) == ".csv")
        nilflow::io::write_text_file(resolve_out(out),
                                     nilflow::io::trajectory_to_csv(pb.algebra, traj));
      else
        emit_json(nilflow::io::trajectory_to_json(pb.algebra, traj), out);
      return 0;
    }
    if (asy->parsed()) {
      nilflow::MetricState g0 = metric_path.empty()
                                    ? nilflow::random_diag_metric(2 * asy_n + 1, seed)
                                    : load_metric(metric_path);
      nilflow::FlowProblem pb{nilflow::heisenberg(asy_n), g0};
      pb.t1 = t1;
      pb.rtol = rtol;
      pb.sample_times.push_back(0.0);
      for (int i = 0; i <= 60; ++i)
        pb.sample_times.push_back(std::pow(t1, i / 60.0));
      auto traj = nilflow::integrate(pb);
      auto prof = nilflow::predict(asy_n, g0.diag());
      auto rep = nilflow::ratio_convergence(traj, prof, t_lo, t1);
      json j{{"g0", std::vector<double>(g0.diag().data(), g0.diag().data() + g0.dim())},
             {"gamma", std::vector<double>(prof.gamma.data(), prof.gamma.data() + g0.dim())},
             {"exponents",
              std::vector<double>(prof.exponents.data(), prof.exponents.data() + g0.dim())},
             {"max_start", rep.max_start},
             {"max_end", rep.max_end},
             {"t_start", rep.t_start},
             {"t_end", rep.t_end}};
      emit_json(j, out);
      return 0;
    }
    if (make->parsed()) {
      nilflow::MetricState g =
          family == "heisenberg" ? nilflow::soliton_heisenberg(n, sol_t)
          : family == "unitriangular"
              ? nilflow::soliton_unitriangular(n, sol_t, sol_A)
              : throw CLI::ValidationError("--family must be heisenberg or unitriangular");
      emit_json(nilflow::io::metric_to_json(g), out);
      return 0;
    }
    if (cert->parsed()) {
      auto spec = load_algebra(in_path);
      auto c = nilflow::lauret_certify(spec, load_metric(metric_path));
      emit_json(nilflow::io::certificate_to_json(c, tol), out);
      return c.valid(tol) ? 0 : 1;
    }
    if (exp->parsed()) {
      json cfg = config_path.empty() ? json::object() : nilflow::io::read_json_file(config_path);
      cfg["experiment"] = exp_name;
      json report = nilflow::run_experiment(cfg);
      emit_json(report, out);
      return report.at("pass").get<bool>() ? 0 : 1;
    }
  } catch (const nilflow::ode::Breakdown& e) {
    std::cerr << "breakdown: " << e.what() << " (last valid t = " << e.t_last << ")\n";
    return 3;
  } catch (const CLI::Error& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
