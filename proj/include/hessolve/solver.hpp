#pragma once

#include <vector>

#include "hessolve/problem.hpp"

namespace hessolve::solver {

/// Nodal residual F_h[u] - rhs over the interior (zero on the ring).
struct Residual {
  grid::GridField value;
  double max_abs = 0.0;        ///< interior max norm
  long cone_violations = 0;    ///< nodes whose curvature tuple left the cone
  double min_sigma = 0.0;      ///< worst cone margin seen while evaluating
};

/// Evaluates the residual with the closure extension; tuples outside the
/// slack-enlarged cone are counted, not thrown.
Residual residual(const symfunc::SymmetricFunctionSpec& spec, double gamma,
                  const grid::GridField& u, const grid::GridField& rhs,
                  double cone_slack);

/// Per-interior-node coefficient matrices of the discrete linearization,
/// assembled with the cone-boundary clamp.  Applies matrix-free as
///   (L v)(x) = sum_ij C_ij(x) (second difference of v)_ij,  v = 0 on the ring.
struct CoefficientField {
  grid::Grid grid;
  std::vector<double> entries;  ///< interior-node-major, packed upper triangle
  std::vector<long> interior;   ///< flat indices of interior nodes, row-major
  int dim = 0;

  long rows() const { return static_cast<long>(interior.size()); }
};

CoefficientField assemble_linearization(const symfunc::SymmetricFunctionSpec& spec,
                                        double gamma, const grid::GridField& u,
                                        double cone_slack);

/// L v for a field vanishing on the ring (only interior values of v are read).
grid::GridField apply_linearization(const CoefficientField& c,
                                    const grid::GridField& v);

struct LinearSolveRecord {
  grid::GridField x;
  long iterations = 0;
  double rel_residual = 0.0;
};

/// Solves L delta = b (b supported on the interior) by BiCGSTAB with Jacobi
/// preconditioning to a relative residual below rel_tol.  Breakdown restarts
/// once; exceeding the budget or a second breakdown throws NonConvergence
/// with the residual history attached.
LinearSolveRecord linear_solve(const CoefficientField& c, const grid::GridField& b,
                               double rel_tol, long max_iter);

enum class SolveStatus {
  Converged,
  LineSearchStalled,  ///< no admissible decreasing step above the floor
  IterationLimit,
};

const char* to_string(SolveStatus s);

/// One Newton step's worth of diagnostics.
struct IterationLog {
  double eps = 0.0;          ///< continuation stage this step belongs to
  int iter = 0;              ///< step index within the stage
  double residual_norm = 0.0;
  double step_scale = 0.0;   ///< accepted damping factor (0 for the final eval)
  long linear_iters = 0;     ///< Krylov iterations spent on the step
  double min_sigma = 0.0;    ///< cone margin of the accepted iterate
  long cone_violations = 0;  ///< slack-inadmissible nodes of the accepted iterate
};

/// Outcome of one damped-Newton run at a fixed right-hand side.
struct SolveRecord {
  grid::GridField u;
  SolveStatus status = SolveStatus::IterationLimit;
  std::vector<IterationLog> trace;
  double final_residual = 0.0;
  int iterations = 0;
  double eps = 0.0;  ///< stage tag copied into the trace
};

/// Damped Newton iteration for F_h[u] = rhs from an admissible start:
/// full steps are halved until the trial iterate is admissible (with the
/// scale-aware slack) and the residual max norm drops by the Armijo factor
/// (1 - s/4).  Stops at tol * (1 + max|rhs|).  Never throws for stalls or
/// iteration exhaustion; those are reported through the status.
SolveRecord newton_solve(const problem::ProblemSpec& p, const grid::GridField& rhs,
                         const grid::GridField& init,
                         const problem::NewtonParams& params, double eps_tag);

/// Full continuation run: builds the lower field, derives eps0, walks the
/// descending schedule with warm starts.  A failed stage ends the walk; its
/// status and best iterate are returned.
struct ContinuityRecord {
  problem::Subsolution sub;
  std::vector<double> schedule;
  std::vector<SolveRecord> stages;

  const SolveRecord& last() const { return stages.back(); }
  bool converged() const {
    return !stages.empty() && stages.back().status == SolveStatus::Converged;
  }
};

ContinuityRecord continuity_solve(const problem::ProblemSpec& p);

}  // namespace hessolve::solver
