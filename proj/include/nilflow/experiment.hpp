#pragma once

#include "nilflow/io.hpp"

namespace nilflow {

/// Named end-to-end runs: each composes the library modules, evaluates its
/// pass criteria at pinned tolerances, and returns a report. Reports are
/// byte-identical across runs with the same config except for "wall_ms".
///
/// Names: nil3_reference, oracle_equivalence, ricci_diag_sweep,
/// heisenberg_asymptotics, heisenberg_soliton, ut_soliton.
///
/// The config carries {"experiment": <name>} plus optional per-experiment
/// parameter overrides; run_experiment fills defaults and echoes the
/// effective inputs into the report.
io::json run_experiment(const io::json& config);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace nilflow
