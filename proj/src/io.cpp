#include "nilflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nilflow::io {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const int r = static_cast<int>(j.size());
  if (r == 0) throw std::invalid_argument("matrix: empty");
  const int c = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(j.at(i).size()) != c)
      throw std::invalid_argument("matrix: ragged rows");
    for (int k = 0; k < c; ++k) m(i, k) = j.at(i).at(k).get<double>();
  }
  return m;
}

}  // namespace

json algebra_to_json(const LieAlgebraSpec& spec) {
  json j;
  j["dim"] = spec.dim();
  j["labels"] = spec.labels();
  json brackets = json::array();
  for (const auto& e : spec.entries())
    brackets.push_back({{"i", e.i + 1}, {"j", e.j + 1}, {"k", e.k + 1}, {"c", e.c}});
  j["brackets"] = std::move(brackets);
  return j;
}

LieAlgebraSpec algebra_from_json(const json& j) {
  const int dim = j.at("dim").get<int>();
  std::vector<BracketEntry> entries;
  for (const auto& b : j.at("brackets")) {
    BracketEntry e;
    e.i = b.at("i").get<int>() - 1;
    e.j = b.at("j").get<int>() - 1;
    e.k = b.at("k").get<int>() - 1;
    e.c = b.at("c").get<double>();
    if (e.i > e.j) {  // accept either orientation in files
      std::swap(e.i, e.j);
      e.c = -e.c;
    }
    entries.push_back(e);
  }
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return LieAlgebraSpec(dim, std::move(entries), std::move(labels));
}

json metric_to_json(const MetricState& g) {
  json j;
  j["dim"] = g.dim();
  if (g.is_diagonal()) {
    json d = json::array();
    for (int i = 0; i < g.dim(); ++i) d.push_back(g.diag()[i]);
    j["diag"] = std::move(d);
  } else {
    j["matrix"] = matrix_to_json(g.matrix());
  }
  return j;
}

MetricState metric_from_json(const json& j) {
  if (j.contains("diag")) {
    auto v = j.at("diag").get<std::vector<double>>();
    return MetricState::diagonal(Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()));
  }
  if (j.contains("matrix")) return MetricState::full(matrix_from_json(j.at("matrix")));
  throw std::invalid_argument("metric: need a \"diag\" or \"matrix\" key");
}

json bundle_to_json(const LieAlgebraSpec& spec, const CurvatureBundle& b) {
  json j;
  j["dim"] = spec.dim();
  j["scalar"] = b.scalar;
  j["ricci"] = matrix_to_json(b.ricci);
  json chris = json::array();
  const int n = spec.dim();
  for (int i = 0; i < n; ++i)
    for (int jj = 0; jj < n; ++jj)
      for (int k = 0; k < n; ++k)
        if (b.christoffel(i, jj, k) != 0.0)
          chris.push_back({{"i", i + 1}, {"j", jj + 1}, {"k", k + 1},
                           {"v", b.christoffel(i, jj, k)}});
  j["christoffel"] = std::move(chris);
  if (!b.sectional_values.empty()) {
    json sec = json::array();
    for (auto [i, jj, v] : b.sectional_values)
      sec.push_back({{"i", i + 1}, {"j", jj + 1}, {"value", v}});
    j["sectional"] = std::move(sec);
  }
  if (b.riemann) {
    json rm = json::array();
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            if ((*b.riemann)(i, jj, k, l) != 0.0)
              rm.push_back({{"i", i + 1}, {"j", jj + 1}, {"k", k + 1}, {"l", l + 1},
                            {"v", (*b.riemann)(i, jj, k, l)}});
    j["riemann"] = std::move(rm);
  }
  j["ill_conditioned"] = b.ill_conditioned;
  return j;
}

std::string trajectory_to_csv(const LieAlgebraSpec& spec, const FlowTrajectory& traj) {
  const auto& labels = spec.labels();
  std::ostringstream out;
  const bool diag = !traj.states.empty() && traj.states.front().is_diagonal();
  out << "t";
  if (diag) {
    for (const auto& l : labels) out << ",g_" << l;
  } else {
    for (int i = 0; i < spec.dim(); ++i)
      for (int j = 0; j <= i; ++j) out << ",g_" << labels[i] << "_" << labels[j];
  }
  out << "\n";
  for (size_t s = 0; s < traj.times.size(); ++s) {
    out << fmt17(traj.times[s]);
    Eigen::VectorXd v = diag ? traj.states[s].diag() : traj.states[s].lower();
    for (int c = 0; c < v.size(); ++c) out << "," << fmt17(v[c]);
    out << "\n";
  }
  return out.str();
}

json trajectory_to_json(const LieAlgebraSpec& spec, const FlowTrajectory& traj) {
  json j;
  switch (traj.mode_used) {
    case RhsMode::heisenberg_diag: j["mode"] = "heisenberg_diag"; break;
    case RhsMode::unitriangular_diag: j["mode"] = "unitriangular_diag"; break;
    default: j["mode"] = "general"; break;
  }
  j["dim"] = spec.dim();
  j["times"] = traj.times;
  json states = json::array();
  for (const auto& st : traj.states) states.push_back(metric_to_json(st));
  j["states"] = std::move(states);
  if (!traj.conserved.empty()) {
    json cons = json::array();
    for (const auto& cs : traj.conserved) {
      json c;
      c["A"] = std::vector<double>(cs.A.data(), cs.A.data() + cs.A.size());
      c["B"] = std::vector<double>(cs.B.data(), cs.B.data() + cs.B.size());
      c["C1"] = cs.C1;
      c["C2"] = cs.C2;
      c["C"] = cs.C;
      cons.push_back(std::move(c));
    }
    j["conserved"] = std::move(cons);
  }
  j["stats"] = {{"accepted", traj.stats.accepted}, {"rejected", traj.stats.rejected}};
  return j;
}

json certificate_to_json(const SolitonCertificate& cert, double tol) {
  json j;
  j["c"] = cert.c;
  j["D"] = matrix_to_json(cert.D);
  j["ricci_residual"] = cert.ricci_residual;
  j["derivation_residual"] = cert.derivation_residual;
  j["tol"] = tol;
  j["valid"] = cert.valid(tol);
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

}  // namespace nilflow::io
