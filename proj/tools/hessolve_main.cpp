#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hessolve/pipeline.hpp"

namespace {

using Clock = std::chrono::steady_clock;

long elapsed_ms(Clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               start)
      .count();
}

void print_stages(const hessolve::solver::ContinuityRecord& rec) {
  for (const hessolve::solver::SolveRecord& s : rec.stages) {
    std::printf("[stage] eps=%.6g status=%s iterations=%d residual=%.3e\n",
                s.eps, hessolve::solver::to_string(s.status), s.iterations,
                s.final_residual);
  }
}

void print_checks(const hessolve::verify::DiagnosticsReport& d) {
  std::printf("[check] comparison %s (margins %.3e / %.3e)\n",
              d.comparison.pass ? "PASS" : "FAIL", d.comparison.min_above_lower,
              d.comparison.min_below_upper);
  std::printf("[check] admissibility %s (%ld violations)\n",
              d.admissibility.pass ? "PASS" : "FAIL", d.admissibility.violations);
  std::printf("[check] ellipticity %s (window [%.3e, %.3e])\n",
              d.ellipticity.pass ? "PASS" : "FAIL", d.ellipticity.lambda_min,
              d.ellipticity.lambda_max);
  std::printf("[check] gradient_gap %s (%ld active, min theta %.3e)\n",
              d.gradient_gap.pass ? "PASS" : "FAIL", d.gradient_gap.active,
              d.gradient_gap.min_theta);
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
  const auto start = Clock::now();
  const hessolve::config::Config cfg = hessolve::config::load_config(config_path);
  const hessolve::pipeline::SolveOutcome out =
      hessolve::pipeline::run_solve(cfg, out_dir);
  print_stages(out.record);
  print_checks(out.diagnostics);
  std::printf("[run] config=%s hash=%s eps0=%.6g a=%.6g outputs=%zu\n",
              cfg.name.c_str(), hessolve::report::hash_hex(cfg.hash).c_str(),
              out.record.sub.eps0, out.record.sub.a_curvature,
              out.manifest.outputs.size());
  // Console only: timing never lands in an output file, keeping reruns
  // byte-identical.
  std::printf("[run] wall_time_ms=%ld\n", elapsed_ms(start));
  if (!out.converged) {
    std::fprintf(stderr, "solve did not converge at eps=%.6g (status %s)\n",
                 out.record.last().eps,
                 hessolve::solver::to_string(out.record.last().status));
    return 3;
  }
  if (!out.checks_pass) {
    std::fprintf(stderr, "converged, but a mandatory check failed\n");
    return 1;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& gammas,
              const std::string& out_dir) {
  const auto start = Clock::now();
  const hessolve::config::Config cfg = hessolve::config::load_config(config_path);
  const hessolve::pipeline::SweepOutcome out = hessolve::pipeline::run_sweep(
      cfg, gammas, out_dir, hessolve::pipeline::thread_budget());
  for (const hessolve::verify::GammaSummary& g : out.table.summary) {
    std::printf("[sweep] gamma=%.6g eps0=%.6g converged=%d c2_ratio=%.4f "
                "c1_ratio=%.4f boundary_ratio=%.4f\n",
                g.gamma, g.eps0, g.converged ? 1 : 0, g.c2_stability_ratio,
                g.c1_stability_ratio, g.boundary_ratio);
  }
  std::printf("[sweep] solved %ld of %ld cells\n", out.solved_cells,
              out.total_cells);
  std::printf("[run] wall_time_ms=%ld\n", elapsed_ms(start));
  if (!out.pass) {
    std::fprintf(stderr, "sweep convergence below the 90%% threshold\n");
    return 3;
  }
  return 0;
}

int cmd_verify(const std::string& solution_path, const std::string& config_path) {
  const hessolve::config::Config cfg = hessolve::config::load_config(config_path);
  const hessolve::grid::GridField solution =
      hessolve::grid::read_json_file(solution_path);
  const hessolve::pipeline::VerifyOutcome out =
      hessolve::pipeline::run_verify(cfg, solution);
  for (const hessolve::pipeline::VerifyRow& r : out.rows) {
    std::printf("[check] %-20s %s%s (%s)\n", r.name.c_str(),
                r.pass ? "PASS" : "FAIL", r.mandatory ? "" : " (informational)",
                r.detail.c_str());
  }
  return out.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hessolve: Dirichlet problems for Hessian-family operators"};
  app.require_subcommand(1);

  std::string config_path, solution_path, out_dir = "out";
  std::vector<double> gammas;

  CLI::App* solve = app.add_subcommand("solve", "solve a config, write artifacts");
  solve->add_option("config", config_path, "problem config (JSON)")->required();
  solve->add_option("-o,--out", out_dir, "output directory");

  CLI::App* sweep = app.add_subcommand("sweep", "gamma sweep with stability table");
  sweep->add_option("config", config_path, "problem config (JSON)")->required();
  sweep->add_option("--gammas", gammas, "gamma values (comma separated)")
      ->delimiter(',');
  sweep->add_option("-o,--out", out_dir, "output directory");

  CLI::App* verify = app.add_subcommand("verify", "check a stored solution");
  verify->add_option("solution", solution_path, "solution field (JSON)")
      ->required();
  verify->add_option("config", config_path, "problem config (JSON)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(config_path, out_dir);
    if (sweep->parsed()) return cmd_sweep(config_path, gammas, out_dir);
    if (verify->parsed()) return cmd_verify(solution_path, config_path);
  } catch (const hessolve::SubsolutionFailed& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const hessolve::NonConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
