#include "hessolve/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <thread>

namespace hessolve::pipeline {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

}  // namespace

SolveOutcome run_solve(const config::Config& cfg, const std::string& out_dir) {
  SolveOutcome out;
  out.record = solver::continuity_solve(cfg.spec);
  const solver::ContinuityRecord& rec = out.record;

  std::filesystem::create_directories(out_dir);
  std::vector<std::string> files;

  for (size_t j = 0; j < rec.stages.size(); ++j) {
    const std::string base = fmt("stage_%02zu_u", j);
    grid::write_json_file(rec.stages[j].u, join(out_dir, base + ".json"));
    files.push_back(base + ".json");
    grid::write_csv_file(rec.stages[j].u, join(out_dir, base + ".csv"));
    files.push_back(base + ".csv");
  }
  grid::write_json_file(rec.last().u, join(out_dir, "solution.json"));
  files.push_back("solution.json");
  grid::write_csv_file(rec.last().u, join(out_dir, "solution.csv"));
  files.push_back("solution.csv");

  std::vector<solver::IterationLog> trace;
  for (const solver::SolveRecord& stage : rec.stages) {
    trace.insert(trace.end(), stage.trace.begin(), stage.trace.end());
  }
  report::write_text_file(join(out_dir, "trace.csv"), report::trace_csv(trace));
  files.push_back("trace.csv");

  const grid::GridField phi_field = grid::sample(cfg.spec.grid, cfg.spec.phi);
  const grid::GridField upper = grid::harmonic_solve(cfg.spec.grid, phi_field);
  out.diagnostics = verify::run_diagnostics(cfg.spec.fspec, cfg.spec.gamma,
                                            rec.last().u, rec.sub.field, upper);
  report::write_text_file(
      join(out_dir, "report.json"),
      report::diagnostics_json(out.diagnostics, cfg.name, cfg.hash));
  files.push_back("report.json");

  out.converged = rec.converged();
  out.checks_pass = out.diagnostics.all_pass;

  report::RunManifest& m = out.manifest;
  m.config_name = cfg.name;
  m.config_hash = cfg.hash;
  m.eps0 = rec.sub.eps0;
  m.a_curvature = rec.sub.a_curvature;
  m.schedule = rec.schedule;
  for (const solver::SolveRecord& stage : rec.stages) {
    m.stages.push_back({stage.eps, solver::to_string(stage.status),
                        stage.iterations, stage.final_residual});
  }
  m.converged = out.converged;
  m.checks_pass = out.checks_pass;
  files.push_back("manifest.json");
  m.outputs = files;
  report::write_text_file(join(out_dir, "manifest.json"), report::manifest_json(m));
  return out;
}

SweepOutcome run_sweep(const config::Config& cfg,
                       const std::vector<double>& gammas,
                       const std::string& out_dir, int threads) {
  std::vector<double> gs = gammas;
  if (gs.empty()) gs.push_back(cfg.spec.gamma);

  SweepOutcome out;
  out.table = verify::estimate_sweep(cfg.spec, gs, threads);
  out.total_cells = static_cast<long>(out.table.cells.size());
  for (const verify::SweepCell& c : out.table.cells) {
    if (c.solved) ++out.solved_cells;
  }
  out.pass = out.total_cells > 0 &&
             10 * out.solved_cells >= 9 * out.total_cells;

  std::filesystem::create_directories(out_dir);
  report::write_text_file(join(out_dir, "sweep.csv"),
                          report::sweep_csv(out.table));
  report::write_text_file(
      join(out_dir, "sweep_summary.json"),
      report::sweep_summary_json(out.table, cfg.name, cfg.hash));
  return out;
}

VerifyOutcome run_verify(const config::Config& cfg,
                         const grid::GridField& solution) {
  if (!solution.grid.same(cfg.spec.grid)) {
    throw InvalidInput("solution grid does not match the config grid");
  }
  const problem::Subsolution sub = problem::auto_subsolution(cfg.spec);
  const grid::GridField phi_field = grid::sample(cfg.spec.grid, cfg.spec.phi);
  const grid::GridField upper = grid::harmonic_solve(cfg.spec.grid, phi_field);

  VerifyOutcome out;
  out.diagnostics = verify::run_diagnostics(cfg.spec.fspec, cfg.spec.gamma,
                                            solution, sub.field, upper);
  const verify::DiagnosticsReport& d = out.diagnostics;
  out.rows.push_back({"comparison", d.comparison.pass, true,
                      fmt("min margins %.3e / %.3e, slack %.3e",
                          d.comparison.min_above_lower,
                          d.comparison.min_below_upper, d.comparison.slack)});
  out.rows.push_back({"admissibility", d.admissibility.pass, true,
                      fmt("%ld violations, worst sigma %.3e, min laplacian %.3e",
                          d.admissibility.violations, d.admissibility.worst_sigma,
                          d.admissibility.laplacian_min)});
  out.rows.push_back({"ellipticity", d.ellipticity.pass, true,
                      fmt("eigenvalue window [%.3e, %.3e]",
                          d.ellipticity.lambda_min, d.ellipticity.lambda_max)});
  out.rows.push_back(
      {"gradient_gap", d.gradient_gap.pass, true,
       fmt("%ld active of %ld, min theta %.3e", d.gradient_gap.active,
           d.gradient_gap.total, d.gradient_gap.min_theta)});

  // Loose screen on the stored field: differencing a solved field twice
  // amplifies solver noise, so the tolerance here is wide; the sharp check
  // runs on analytic fields in the test suite.
  verify::TauSpec tau;
  tau.n = cfg.spec.fspec.n;
  tau.a = SmallVec(tau.n, 0.0);
  tau.t[0 * tau.n + 1] = 1.0;  // generator of the (0,1) plane
  tau.t[1 * tau.n + 0] = -1.0;
  const verify::RotationConcavityReport rot = verify::rotation_concavity_check(
      cfg.spec.fspec, cfg.spec.gamma, solution, tau, 5000.0);
  out.rows.push_back({"rotation_concavity", rot.pass, false,
                      fmt("min margin %.3e, tolerance %.3e", rot.min_margin,
                          rot.tol)});

  out.pass = true;
  for (const VerifyRow& r : out.rows) {
    if (r.mandatory && !r.pass) out.pass = false;
  }
  return out;
}

int thread_budget() {
  if (const char* env = std::getenv("HESSOLVE_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace hessolve::pipeline
