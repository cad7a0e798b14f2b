#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hessolve/solver.hpp"
#include "hessolve/verify.hpp"

namespace hessolve::report {

/// Shortest exact decimal form (%.17g) used by every CSV emitter.
std::string format_double(double v);

/// 16-digit lowercase hex rendering of a content hash.
std::string hash_hex(std::uint64_t h);

struct StageSummary {
  double eps = 0.0;
  std::string status;
  int iterations = 0;
  double final_residual = 0.0;
};

/// Deterministic run record: everything a rerun must reproduce byte for
/// byte.  Wall-clock timing is deliberately absent; it goes to the console
/// log only, so that identical configs yield identical output files.
struct RunManifest {
  std::string config_name;
  std::uint64_t config_hash = 0;
  double eps0 = 0.0;
  double a_curvature = 0.0;
  std::vector<double> schedule;
  std::vector<StageSummary> stages;
  bool converged = false;
  bool checks_pass = false;
  std::vector<std::string> outputs;  ///< file names written by the run
};

std::string manifest_json(const RunManifest& m);

std::string diagnostics_json(const verify::DiagnosticsReport& d,
                             const std::string& config_name,
                             std::uint64_t config_hash);

/// One row per Newton step: eps, iter, residual, damping, Krylov iterations,
/// cone margin and slack-inadmissible node count.
std::string trace_csv(const std::vector<solver::IterationLog>& trace);

/// One row per (gamma, eps) cell of a sweep.
std::string sweep_csv(const verify::SweepTable& t);

std::string sweep_summary_json(const verify::SweepTable& t,
                               const std::string& config_name,
                               std::uint64_t config_hash);

/// Writes content to path, creating parent directories; failures throw
/// InvalidInput.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace hessolve::report
