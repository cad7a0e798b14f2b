#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hessolve/grid.hpp"
#include "hessolve/symfunc.hpp"

namespace hessolve::problem {

/// Smooth cutoff eta used to lift a degenerate right-hand side:
///   eta = 1 on [0, eps0/4], eta = 0 on [eps0/2, infinity),
/// joined by a quintic smoothstep so that eta is C^2 with
///   |eta'| <= 8/eps0 and |eta''| <= 128/eps0^2.
struct Regularizer {
  double eps0 = 0.0;

  double eta(double t) const;
  double eta_prime(double t) const;
  double eta_second(double t) const;
};

/// Builds the cutoff for a positive floor eps0; eps0 <= 0 -> InvalidSpec.
Regularizer build_eta(double eps0);

/// psi + eps * eta(psi) nodewise.  Requires 0 <= eps <= eps0/2; the result
/// is then bounded below by min{eps, eps0/4} wherever psi >= 0.
grid::GridField regularized_rhs(const grid::GridField& psi, double eps,
                                const Regularizer& reg);

/// Newton iteration controls.
struct NewtonParams {
  double tol = 1e-10;
  int max_iter = 30;
};

/// Geometric schedule descriptor: eps_j = eps0 * first_fraction * ratio^-j
/// for j = 0..steps-1.  The fraction may not exceed 1/2 so that every step
/// satisfies the regularizer's admissible range.
struct ScheduleSpec {
  double first_fraction = 0.5;
  double ratio = 4.0;
  int steps = 7;

  void validate() const;
  std::vector<double> materialize(double eps0) const;
};

/// Full problem statement: operator family, gamma, grid, data samplers and
/// solver controls.  Samplers must be defined on the whole closed box.
struct ProblemSpec {
  symfunc::SymmetricFunctionSpec fspec;
  double gamma = 0.5;
  grid::Grid grid;
  grid::Sampler psi;
  grid::Sampler phi;
  ScheduleSpec schedule;
  NewtonParams newton;
  bool allow_gamma_zero = false;

  /// Structural validation plus a nodewise scan asserting psi >= 0.
  /// gamma = 0 without the explicit override -> InvalidSpec (interior
  /// second-derivative control is only guaranteed for positive gamma).
  void validate() const;
};

/// Scale-aware closure slack for nodal admissibility scans of a discrete
/// field: 1e-10 * (1 + max|u| / h^2), the natural size of second-difference
/// roundoff on the grid at hand.
double admissibility_slack(const grid::GridField& u);

/// Lower field from the quadratic family:
///   ulu = H + (A/2)(|x - x_c|^2 - R^2),
/// where H is the discrete-harmonic extension of (phi - quadratic) ring
/// data, x_c the box center and R its circumradius.  The ring therefore
/// carries phi exactly and the quadratic's curvature A*I is added on top of
/// a discrete-harmonic part.  Throws SubsolutionFailed when the result is
/// inadmissible at any interior node.
grid::GridField build_subsolution(const ProblemSpec& p, double a_curvature);

/// A vetted lower field together with the derived regularization floor.
struct Subsolution {
  grid::GridField field;
  double a_curvature = 0.0;   ///< accepted quadratic curvature
  double eps0 = 0.0;          ///< min over interior nodes of F[ulu]
  double min_margin = 0.0;    ///< min over interior nodes of F[ulu] - psi
};

/// Walks an increasing curvature ladder (A = 0, 1, intermediate rungs, then
/// doubling up to 2^30) and accepts the first candidate that is admissible
/// with F[ulu] >= psi at every interior node.  A = 0 is accepted only for
/// identically vanishing psi (the degenerate problem keeps eps0 = 0 and is
/// solved unregularized).  Exhausting the ladder -> SubsolutionFailed.
Subsolution auto_subsolution(const ProblemSpec& p);

/// Cone test for the boundary-geometry condition: true when the principal
/// curvature tuple padded with R, (kappa_1, ..., kappa_{n-1}, R), lies in
/// the open cone of order k.
bool domain_admissible(int n, int k, std::span<const double> kappa, double r);

}  // namespace hessolve::problem
