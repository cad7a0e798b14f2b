#pragma once

#include <string>
#include <vector>

#include "hessolve/config.hpp"
#include "hessolve/report.hpp"
#include "hessolve/verify.hpp"

namespace hessolve::pipeline {

/// End-to-end solve bundle: continuation record, diagnostics of the final
/// iterate and the manifest of everything written to out_dir.
struct SolveOutcome {
  solver::ContinuityRecord record;
  verify::DiagnosticsReport diagnostics;
  report::RunManifest manifest;
  bool converged = false;    ///< every continuation stage converged
  bool checks_pass = false;  ///< mandatory diagnostics on the final iterate
};

/// Solves the config's problem, writes per-stage fields (JSON + CSV), the
/// Newton trace, the diagnostics report and the manifest into out_dir.
/// Throws on config/subsolution/linear-solver failures; stage-level
/// non-convergence is reported through the outcome instead.
SolveOutcome run_solve(const config::Config& cfg, const std::string& out_dir);

struct SweepOutcome {
  verify::SweepTable table;
  long solved_cells = 0;
  long total_cells = 0;
  bool pass = false;  ///< at least 90% of cells converged
};

/// Runs the continuation per gamma (empty list -> the config's own gamma),
/// writes sweep.csv and sweep_summary.json into out_dir.
SweepOutcome run_sweep(const config::Config& cfg,
                       const std::vector<double>& gammas,
                       const std::string& out_dir, int threads);

/// One row of the verify command's pass/fail table.
struct VerifyRow {
  std::string name;
  bool pass = false;
  bool mandatory = true;
  std::string detail;
};

struct VerifyOutcome {
  std::vector<VerifyRow> rows;
  verify::DiagnosticsReport diagnostics;
  bool pass = false;  ///< all mandatory rows pass
};

/// Re-derives the lower and harmonic reference fields from the config and
/// checks the stored solution: comparison, admissibility, ellipticity,
/// gradient gap, and a loose-tolerance rotation-concavity screen (the tight
/// version of that check needs analytic fields and lives in the test suite).
/// Grid mismatch between solution and config -> InvalidInput.
VerifyOutcome run_verify(const config::Config& cfg,
                         const grid::GridField& solution);

/// Thread budget: HESSOLVE_THREADS when set, hardware concurrency otherwise,
/// at least 1.
int thread_budget();

}  // namespace hessolve::pipeline
