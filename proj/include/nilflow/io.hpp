#pragma once

#include "nilflow/curvature.hpp"
#include "nilflow/flow.hpp"
#include "nilflow/soliton.hpp"

#include "json.hpp"

#include <string>

namespace nilflow::io {

using json = nlohmann::ordered_json;

/// All file formats use 1-based indices; in-memory structures are 0-based.

json algebra_to_json(const LieAlgebraSpec& spec);
LieAlgebraSpec algebra_from_json(const json& j);

json metric_to_json(const MetricState& g);
MetricState metric_from_json(const json& j);

json bundle_to_json(const LieAlgebraSpec& spec, const CurvatureBundle& b);

std::string trajectory_to_csv(const LieAlgebraSpec& spec, const FlowTrajectory& traj);
json trajectory_to_json(const LieAlgebraSpec& spec, const FlowTrajectory& traj);

json certificate_to_json(const SolitonCertificate& cert, double tol = 1e-10);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nilflow::io
