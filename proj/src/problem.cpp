#include "hessolve/problem.hpp"

#include <cmath>
#include <limits>

namespace hessolve::problem {

namespace {

// Quintic smoothstep and derivatives on [0, 1].
double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 + s * (-2.0 + s)); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 + s * (-3.0 + 2.0 * s)); }

}  // namespace

double Regularizer::eta(double t) const {
  const double lo = 0.25 * eps0, hi = 0.5 * eps0;
  if (t <= lo) return 1.0;
  if (t >= hi) return 0.0;
  return 1.0 - smoothstep((t - lo) / lo);
}

double Regularizer::eta_prime(double t) const {
  const double lo = 0.25 * eps0, hi = 0.5 * eps0;
  if (t <= lo || t >= hi) return 0.0;
  return -smoothstep_d1((t - lo) / lo) / lo;
}

double Regularizer::eta_second(double t) const {
  const double lo = 0.25 * eps0, hi = 0.5 * eps0;
  if (t <= lo || t >= hi) return 0.0;
  return -smoothstep_d2((t - lo) / lo) / (lo * lo);
}

Regularizer build_eta(double eps0) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) {
    throw InvalidSpec("build_eta: eps0 must be positive");
  }
  return Regularizer{eps0};
}

grid::GridField regularized_rhs(const grid::GridField& psi, double eps,
                                const Regularizer& reg) {
  if (!(reg.eps0 > 0.0)) throw InvalidSpec("regularized_rhs: regularizer not built");
  if (eps < 0.0 || eps > 0.5 * reg.eps0) {
    throw InvalidSpec("regularized_rhs: eps must lie in [0, eps0/2]");
  }
  grid::GridField out = psi;
  for (double& v : out.values) v += eps * reg.eta(v);
  return out;
}

void ScheduleSpec::validate() const {
  if (!(first_fraction > 0.0) || first_fraction > 0.5) {
    throw InvalidSpec("schedule: first fraction must lie in (0, 1/2]");
  }
  if (!(ratio > 1.0)) throw InvalidSpec("schedule: ratio must exceed 1");
  if (steps < 1 || steps > 64) throw InvalidSpec("schedule: steps must lie in [1, 64]");
}

std::vector<double> ScheduleSpec::materialize(double eps0) const {
  validate();
  if (eps0 < 0.0) throw InvalidSpec("schedule: negative eps0");
  if (eps0 == 0.0) return {0.0};  // exactly degenerate data: single direct solve
  std::vector<double> eps(steps);
  double v = eps0 * first_fraction;
  for (int j = 0; j < steps; ++j, v /= ratio) eps[j] = v;
  return eps;
}

void ProblemSpec::validate() const {
  fspec.validate();
  grid.validate();
  if (fspec.n != grid.dim) throw InvalidSpec("problem: operator dimension must match grid");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw InvalidSpec("problem: gamma must be nonnegative");
  }
  if (gamma == 0.0 && !allow_gamma_zero) {
    throw InvalidSpec(
        "problem: gamma = 0 needs the explicit override; interior curvature "
        "bounds are only guaranteed for gamma > 0");
  }
  schedule.validate();
  if (!(newton.tol > 0.0)) throw InvalidSpec("problem: newton tol must be positive");
  if (newton.max_iter < 1) throw InvalidSpec("problem: newton max_iter must be >= 1");
  if (!psi || !phi) throw InvalidSpec("problem: psi and phi samplers are required");

  double worst = 0.0;
  grid::for_each_node(grid, [&](const std::array<int, 3>& idx, long) {
    worst = std::min(worst, psi(grid.coords(idx)));
  });
  if (worst < 0.0) {
    throw InvalidSpec("problem: psi must be nonnegative (worst nodal value " +
                      std::to_string(worst) + ")");
  }
}

double admissibility_slack(const grid::GridField& u) {
  const double h = u.grid.min_spacing();
  return 1e-10 * (1.0 + u.max_abs() / (h * h));
}

grid::GridField build_subsolution(const ProblemSpec& p, double a_curvature) {
  p.validate();
  if (!(a_curvature >= 0.0) || !std::isfinite(a_curvature)) {
    throw InvalidSpec("build_subsolution: curvature must be nonnegative");
  }
  const grid::Grid& g = p.grid;
  const grid::Coord xc = g.center();
  const double r2 = g.circumradius() * g.circumradius();

  const auto quadratic = [&](const grid::Coord& x) {
    double d2 = 0.0;
    for (int a = 0; a < g.dim; ++a) d2 += (x[a] - xc[a]) * (x[a] - xc[a]);
    return 0.5 * a_curvature * (d2 - r2);
  };

  // Harmonic part absorbs the quadratic's ring trace so the ring is exact.
  grid::GridField ring(g, 0.0);
  grid::for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    if (g.is_boundary(idx)) {
      const grid::Coord x = g.coords(idx);
      ring.values[flat] = p.phi(x) - quadratic(x);
    }
  });
  grid::GridField ulu = grid::harmonic_solve(g, ring);
  grid::for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    if (g.is_boundary(idx)) {
      ulu.values[flat] = p.phi(g.coords(idx));  // exact ring, no roundoff drift
    } else {
      ulu.values[flat] += quadratic(g.coords(idx));
    }
  });

  // Admissibility scan with the scale-aware closure slack.
  const double slack = admissibility_slack(ulu);
  long worst_node = -1;
  double worst_sigma = std::numeric_limits<double>::infinity();
  SmallVec worst_lambda;
  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const spectral::SymMatrix uu =
        spectral::gamma_shift(grid::hessian_fd(ulu, idx), p.gamma);
    const spectral::EigenDecomp d = spectral::eigen_sym(uu);
    const symfunc::ConeEval ev = symfunc::evaluate_closure(p.fspec, d.lambda.span());
    if (ev.min_sigma < worst_sigma) {
      worst_sigma = ev.min_sigma;
      worst_node = flat;
      worst_lambda = d.lambda;
    }
  });
  if (worst_sigma < -slack) {
    std::vector<double> lam(worst_lambda.span().begin(), worst_lambda.span().end());
    throw SubsolutionFailed(
        "build_subsolution: inadmissible at node " + std::to_string(worst_node) +
            " (worst sigma " + std::to_string(worst_sigma) + ", curvature " +
            std::to_string(a_curvature) + ")",
        worst_node, lam);
  }
  return ulu;
}

Subsolution auto_subsolution(const ProblemSpec& p) {
  p.validate();
  const grid::Grid& g = p.grid;

  double psi_max = 0.0;
  grid::GridField psi_field = grid::sample(g, p.psi);
  grid::for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
    psi_max = std::max(psi_max, psi_field.values[flat]);
  });
  const double h = g.min_spacing();
  const double h2log = h * h * std::max(1.0, -std::log(h));
  const bool psi_zero = psi_max <= 1e-12;

  // Low rungs cover data matched by a unit quadratic; doubling covers the rest.
  std::vector<double> ladder = {0.0, 1.0, 1.25, 1.5, 2.0, 3.0};
  for (double a = 4.0; a <= std::ldexp(1.0, 30); a *= 2.0) ladder.push_back(a);

  std::string last_failure = "no candidate tried";
  for (double a : ladder) {
    // The candidate is exact only up to the second-difference error of its
    // discrete-harmonic part, so the acceptance floor carries an
    // h^2 * log(1/h) allowance alongside the pure roundoff term.
    const double margin_tol =
        1e-9 * (1.0 + psi_max) + 2.0 * h2log * (1.0 + a + psi_max);
    grid::GridField ulu;
    try {
      ulu = build_subsolution(p, a);
    } catch (const SubsolutionFailed& e) {
      last_failure = e.what();
      continue;
    }
    const grid::OperatorField op = grid::apply_operator(p.fspec, p.gamma, ulu, 0.0);
    double min_f = std::numeric_limits<double>::infinity();
    double min_margin = std::numeric_limits<double>::infinity();
    grid::for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
      min_f = std::min(min_f, op.value.values[flat]);
      min_margin = std::min(min_margin, op.value.values[flat] - psi_field.values[flat]);
    });
    if (min_margin < -margin_tol) {
      last_failure = "curvature " + std::to_string(a) + ": operator dips " +
                     std::to_string(-min_margin) + " below psi";
      continue;
    }
    if (!(min_f > margin_tol) && !psi_zero) {
      last_failure = "curvature " + std::to_string(a) + ": operator floor " +
                     std::to_string(min_f) + " is not positive";
      continue;
    }
    Subsolution s;
    s.field = std::move(ulu);
    s.a_curvature = a;
    s.eps0 = std::max(min_f, 0.0);
    if (psi_zero && !(s.eps0 > margin_tol)) s.eps0 = 0.0;
    s.min_margin = min_margin;
    return s;
  }
  throw SubsolutionFailed("auto_subsolution: ladder exhausted; last failure: " +
                          last_failure);
}

bool domain_admissible(int n, int k, std::span<const double> kappa, double r) {
  if (n < 2 || n > kMaxDim) throw InvalidSpec("domain_admissible: n out of range");
  if (static_cast<int>(kappa.size()) != n - 1) {
    throw InvalidInput("domain_admissible: need n-1 principal curvatures");
  }
  SmallVec tuple(n);
  for (int i = 0; i < n - 1; ++i) tuple[i] = kappa[i];
  tuple[n - 1] = r;
  return symfunc::in_cone(tuple.span(), k, 0.0);
}

}  // namespace hessolve::problem
