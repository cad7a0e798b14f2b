#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hessolve/problem.hpp"
#include "hessolve/solver.hpp"

namespace hessolve::verify {

/// Two-sided nodewise bound lower <= u <= upper, tested with a slack.
struct ComparisonReport {
  double min_above_lower = 0.0;  ///< min over nodes of u - lower
  double min_below_upper = 0.0;  ///< min over nodes of upper - u
  long worst_lower_node = -1;
  long worst_upper_node = -1;
  double slack = 0.0;
  bool pass = false;
};

ComparisonReport comparison_check(const grid::GridField& u,
                                  const grid::GridField& lower,
                                  const grid::GridField& upper, double slack);

/// Natural slack for discrete comparison statements: 10 h^2 (1 + max|ring|).
double comparison_slack(const grid::GridField& u);

/// Nodewise cone membership of the curvature tuple plus the trace positivity
/// (1 + n gamma) * laplacian >= 0 that admissibility implies.
struct AdmissibilityReport {
  long violations = 0;        ///< interior nodes outside the slack-enlarged cone
  double worst_sigma = 0.0;   ///< min over nodes and j <= k of sigma_j
  double laplacian_min = 0.0; ///< min over interior of (1 + n gamma) lap_h u
  double tol = 0.0;
  bool pass = false;
};

AdmissibilityReport admissibility_check(const symfunc::SymmetricFunctionSpec& spec,
                                        double gamma, const grid::GridField& u);

/// Extremes of the linearized operator's coefficient spectrum over the grid.
struct EllipticityReport {
  double lambda_min = 0.0;   ///< min over interior nodes of eig_min(C(x))
  double lambda_max = 0.0;   ///< max over interior nodes of eig_max(C(x))
  double min_trace_f = 0.0;  ///< min over interior nodes of sum_i f_i
  bool pass = false;         ///< lambda_min > 0 (gamma > 0 solves)
};

EllipticityReport ellipticity_check(const symfunc::SymmetricFunctionSpec& spec,
                                    double gamma, const grid::GridField& u);

/// Empirical check of the quantified gradient inequality between the solve's
/// curvature tuples and the lower field's, node by node.
struct GradientGapReport {
  long total = 0;    ///< interior nodes
  long skipped = 0;  ///< nodes where either tuple is not strictly interior
  long active = 0;   ///< nodes where the normal-separation hypothesis fires
  double min_theta = 0.0;       ///< min over active nodes of lhs / (1 + sum f_i)
  double activation_fraction = 0.0;
  bool pass = false;  ///< vacuous when active == 0, else min_theta > 0
};

GradientGapReport gradient_gap_check(const symfunc::SymmetricFunctionSpec& spec,
                                     double gamma, const grid::GridField& u,
                                     const grid::GridField& lower);

/// Constants of the boundary-layer barrier
///   Psi = (a1 (u - lower) + t d - (big_n / 2) d^2 + a3 |x|^2) / delta^2
///         - a2 (u - lower) - a4 * sum over tangential l of |grad_l(u - phi)|^2.
struct BarrierConstants {
  double a1 = 1.0, a2 = 0.25, a3 = 1.0, a4 = 1.0;
  double t = 1.0, big_n = 1.0;
  double delta = 0.1, k = 1.0;

  /// All entries positive and a1 > 2 a2; otherwise InvalidInput.
  void validate() const;
};

/// Face-interior boundary segment of the box: the face on `axis` at the low
/// or high end, restricted to a strict tangential subinterval (so the patch
/// never touches an edge or corner of the box).
struct BoundaryPatch {
  int axis = 1;
  int side = 0;  ///< 0 = face at coordinate 0, 1 = face at extents[axis]
  std::array<double, 2> tang_lo{};  ///< per tangential axis, ascending axis order
  std::array<double, 2> tang_hi{};

  void validate(const grid::Grid& g) const;
  double distance(const grid::Grid& g, const grid::Coord& x) const;
  bool tangential_inside(const grid::Grid& g, const grid::Coord& x) const;
};

/// Nodewise barrier margin L Psi + k (1 + sum F^ii) over the boundary band
/// (interior nodes within delta of the patch, tangentially inside it);
/// nonpositive entries certify the barrier inequality at that node.
struct BarrierReport {
  grid::GridField margin;   ///< defined on band nodes, 0 elsewhere
  std::vector<long> band;   ///< flat indices of the band
  long nonpositive = 0;
  double fraction = 0.0;
  double worst = 0.0;       ///< max margin over the band
  bool pass = false;        ///< nonempty band with fraction >= 0.99
};

BarrierReport barrier_margin(const symfunc::SymmetricFunctionSpec& spec,
                             double gamma, const grid::GridField& u,
                             const grid::GridField& lower,
                             const grid::GridField& phi_field,
                             const BarrierConstants& consts,
                             const BoundaryPatch& patch);

/// Log-grid search for a constants vector certifying the barrier inequality
/// on at least 99% of the band.  The margin is affine in the constants, so
/// the per-node operator applications are shared across all combinations.
struct BarrierSearchResult {
  BarrierConstants best;
  BarrierReport report;
  long combos = 0;
  bool found = false;
};

BarrierSearchResult barrier_search(const symfunc::SymmetricFunctionSpec& spec,
                                   double gamma, const grid::GridField& u,
                                   const grid::GridField& lower,
                                   const grid::GridField& phi_field,
                                   const BoundaryPatch& patch);

/// Affine rotation field tau_i = T_i^j x_j + a_i with T skew-symmetric.
struct TauSpec {
  int n = 2;
  std::array<double, kMaxDim * kMaxDim> t{};  ///< row-major T_i^j
  SmallVec a;

  void validate() const;  ///< skew-symmetry and dimension checks
  double tval(int i, int j) const { return t[static_cast<size_t>(i) * n + j]; }
  SmallVec tau_at(const grid::Coord& x) const;
};

/// Discrete check of the rotation-concavity inequality
///   L(u_(tau)(tau)) >= (F[U])_(tau)(tau):
/// builds w = tau_i tau_j u_ij + <grad u, T tau> by nested differencing,
/// applies the linearized operator at u, and subtracts the twice-differenced
/// operator field along tau.  Reports the min margin over the margin-2 box.
struct RotationConcavityReport {
  double min_margin = 0.0;
  long nodes = 0;
  double tol = 0.0;  ///< c_test * h^2
  bool pass = false; ///< min_margin >= -tol
};

RotationConcavityReport rotation_concavity_check(
    const symfunc::SymmetricFunctionSpec& spec, double gamma,
    const grid::GridField& u, const TauSpec& tau, double c_test);

/// Discrete surrogates of the first- and second-derivative norms.
struct FieldStats {
  double c1_norm = 0.0;      ///< max interior gradient magnitude
  double c2_interior = 0.0;  ///< max Hessian spectral radius, 25%-margin box
  double c2_global = 0.0;    ///< same over every interior node
  double c2_boundary = 0.0;  ///< face nodes, one-sided normal stencils; corners excluded
};

FieldStats field_stats(const grid::GridField& u);

/// One continuation stage of one sweep run.
struct SweepCell {
  double gamma = 0.0;
  double eps = 0.0;
  FieldStats stats;
  int iterations = 0;
  std::string status;
  bool solved = false;
};

/// Per-gamma digest across that run's stages.
struct GammaSummary {
  double gamma = 0.0;
  double eps0 = 0.0;
  double c2_stability_ratio = 0.0;  ///< c2_global at smallest eps / next one
  double c1_stability_ratio = 0.0;
  double boundary_ratio = 0.0;      ///< c2_global / (1 + c2_boundary), final stage
  bool converged = false;
};

struct SweepTable {
  std::vector<SweepCell> cells;
  std::vector<GammaSummary> summary;
};

/// Runs the continuation once per gamma (in parallel when threads > 1) and
/// tabulates the derivative surrogates of every stage.  Solver failures are
/// recorded in the affected cells; the sweep continues.
SweepTable estimate_sweep(const problem::ProblemSpec& base,
                          std::span<const double> gammas, int threads);

/// Full diagnostics bundle for one converged solve.
struct DiagnosticsReport {
  ComparisonReport comparison;
  AdmissibilityReport admissibility;
  EllipticityReport ellipticity;
  GradientGapReport gradient_gap;
  FieldStats stats;
  bool all_pass = false;
};

/// upper: discrete-harmonic extension of the ring data (built by the caller
/// through an independent path).
DiagnosticsReport run_diagnostics(const symfunc::SymmetricFunctionSpec& spec,
                                  double gamma, const grid::GridField& u,
                                  const grid::GridField& lower,
                                  const grid::GridField& upper);

}  // namespace hessolve::verify
