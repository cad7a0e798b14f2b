#include "hessolve/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hessolve::solver {

Residual residual(const symfunc::SymmetricFunctionSpec& spec, double gamma,
                  const grid::GridField& u, const grid::GridField& rhs,
                  double cone_slack) {
  if (!u.grid.same(rhs.grid)) throw InvalidInput("residual: grid mismatch");
  const grid::OperatorField op = grid::apply_operator(spec, gamma, u, -cone_slack);

  Residual r;
  r.value = grid::GridField(u.grid, 0.0);
  r.cone_violations = op.flagged;
  r.min_sigma = op.min_sigma;
  double worst = 0.0;
  grid::for_each_interior_node(u.grid, [&](const std::array<int, 3>&, long flat) {
    const double g = op.value.values[flat] - rhs.values[flat];
    r.value.values[flat] = g;
    worst = std::max(worst, std::abs(g));
  });
  r.max_abs = worst;
  return r;
}

CoefficientField assemble_linearization(const symfunc::SymmetricFunctionSpec& spec,
                                        double gamma, const grid::GridField& u,
                                        double cone_slack) {
  const grid::Grid& g = u.grid;
  CoefficientField c;
  c.grid = g;
  c.dim = g.dim;
  const int nsym = g.dim * (g.dim + 1) / 2;
  c.interior.reserve(static_cast<size_t>(g.nodes()));
  c.entries.reserve(static_cast<size_t>(g.nodes()) * nsym);

  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const spectral::SymMatrix h = grid::hessian_fd(u, idx);
    const spectral::SymMatrix m =
        spectral::linearization_clamped(spec, h, gamma, cone_slack);
    c.interior.push_back(flat);
    for (int a = 0; a < g.dim; ++a) {
      for (int b = a; b < g.dim; ++b) c.entries.push_back(m(a, b));
    }
  });
  return c;
}

grid::GridField apply_linearization(const CoefficientField& c,
                                    const grid::GridField& v) {
  if (!c.grid.same(v.grid)) throw InvalidInput("apply_linearization: grid mismatch");
  const grid::Grid& g = c.grid;
  grid::GridField out(g, 0.0);
  const int nsym = g.dim * (g.dim + 1) / 2;

  long row = 0;
  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const spectral::SymMatrix h = grid::hessian_fd(v, idx);
    const double* e = &c.entries[static_cast<size_t>(row) * nsym];
    double acc = 0.0;
    int p = 0;
    for (int a = 0; a < g.dim; ++a) {
      for (int b = a; b < g.dim; ++b, ++p) {
        acc += (a == b ? 1.0 : 2.0) * e[p] * h(a, b);
      }
    }
    out.values[flat] = acc;
    ++row;
  });
  return out;
}

namespace {

// Vector helpers over the interior index list; ring entries stay zero.
double dot_i(const CoefficientField& c, const grid::GridField& a,
             const grid::GridField& b) {
  double s = 0.0;
  for (long f : c.interior) s += a.values[f] * b.values[f];
  return s;
}

double norm_i(const CoefficientField& c, const grid::GridField& a) {
  return std::sqrt(dot_i(c, a, a));
}

// diag(L): only the diagonal second differences touch the center node.
grid::GridField jacobi_diagonal(const CoefficientField& c) {
  const grid::Grid& g = c.grid;
  grid::GridField d(g, 1.0);
  const int nsym = g.dim * (g.dim + 1) / 2;
  long row = 0;
  for (long f : c.interior) {
    const double* e = &c.entries[static_cast<size_t>(row) * nsym];
    double acc = 0.0;
    int p = 0;
    for (int a = 0; a < g.dim; ++a) {
      for (int b = a; b < g.dim; ++b, ++p) {
        if (a == b) {
          const double h = g.spacing(a);
          acc += e[p] * (-2.0 / (h * h));
        }
      }
    }
    d.values[f] = (std::abs(acc) > 1e-300) ? acc : 1.0;
    ++row;
  }
  return d;
}

}  // namespace

LinearSolveRecord linear_solve(const CoefficientField& c, const grid::GridField& b,
                               double rel_tol, long max_iter) {
  if (!c.grid.same(b.grid)) throw InvalidInput("linear_solve: grid mismatch");
  const grid::Grid& g = c.grid;

  LinearSolveRecord rec;
  rec.x = grid::GridField(g, 0.0);
  const double bnorm = norm_i(c, b);
  if (bnorm == 0.0) return rec;
  const double target = rel_tol * bnorm;

  const grid::GridField diag = jacobi_diagonal(c);
  const auto precond = [&](const grid::GridField& in, grid::GridField& out) {
    for (long f : c.interior) out.values[f] = in.values[f] / diag.values[f];
  };

  grid::GridField r = b;           // x = 0
  grid::GridField rhat = r;
  grid::GridField p(g, 0.0), v(g, 0.0), phat(g, 0.0), shat(g, 0.0);
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  bool restarted = false;
  std::vector<double> history;
  history.push_back(bnorm);

  for (long it = 1; it <= max_iter; ++it) {
    const double rho_new = dot_i(c, rhat, r);
    const bool breakdown = std::abs(rho_new) < 1e-40 * bnorm * bnorm ||
                           (it > 1 && omega == 0.0);
    if (breakdown) {
      if (restarted) {
        throw NonConvergence("linear_solve: BiCGSTAB breakdown", history);
      }
      restarted = true;
      rhat = r;
      rho = alpha = omega = 1.0;
      for (long f : c.interior) {
        p.values[f] = 0.0;
        v.values[f] = 0.0;
      }
      continue;
    }
    const double beta = (it == 1) ? 0.0 : (rho_new / rho) * (alpha / omega);
    for (long f : c.interior) {
      p.values[f] = r.values[f] + beta * (p.values[f] - omega * v.values[f]);
    }
    precond(p, phat);
    v = apply_linearization(c, phat);
    const double rhat_v = dot_i(c, rhat, v);
    if (std::abs(rhat_v) < 1e-300) {
      throw NonConvergence("linear_solve: BiCGSTAB stagnation", history);
    }
    alpha = rho_new / rhat_v;

    grid::GridField s = r;
    for (long f : c.interior) s.values[f] -= alpha * v.values[f];
    double snorm = norm_i(c, s);
    if (snorm <= target) {
      for (long f : c.interior) rec.x.values[f] += alpha * phat.values[f];
      history.push_back(snorm);
      rec.iterations = it;
      rec.rel_residual = snorm / bnorm;
      return rec;
    }
    precond(s, shat);
    const grid::GridField t = apply_linearization(c, shat);
    const double tt = dot_i(c, t, t);
    omega = (tt > 0.0) ? dot_i(c, t, s) / tt : 0.0;

    for (long f : c.interior) {
      rec.x.values[f] += alpha * phat.values[f] + omega * shat.values[f];
      r.values[f] = s.values[f] - omega * t.values[f];
    }
    const double rnorm = norm_i(c, r);
    history.push_back(rnorm);
    if (rnorm <= target) {
      rec.iterations = it;
      rec.rel_residual = rnorm / bnorm;
      return rec;
    }
    rho = rho_new;
  }
  throw NonConvergence("linear_solve: iteration budget exhausted", history);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::LineSearchStalled: return "line_search_stalled";
    case SolveStatus::IterationLimit: return "iteration_limit";
  }
  return "unknown";
}

SolveRecord newton_solve(const problem::ProblemSpec& p, const grid::GridField& rhs,
                         const grid::GridField& init,
                         const problem::NewtonParams& params, double eps_tag) {
  if (!init.grid.same(p.grid) || !rhs.grid.same(p.grid)) {
    throw InvalidInput("newton_solve: grid mismatch");
  }
  const double step_floor = std::ldexp(1.0, -20);
  const double tol_eff = params.tol * (1.0 + rhs.max_abs());

  SolveRecord rec;
  rec.eps = eps_tag;
  rec.u = init;

  double slack = problem::admissibility_slack(rec.u);
  Residual res = residual(p.fspec, p.gamma, rec.u, rhs, slack);
  if (res.cone_violations > 0) {
    throw InvalidInput("newton_solve: initial iterate is inadmissible");
  }
  rec.trace.push_back(
      {eps_tag, 0, res.max_abs, 0.0, 0, res.min_sigma, res.cone_violations});

  rec.status = SolveStatus::IterationLimit;
  for (int iter = 1; iter <= params.max_iter; ++iter) {
    if (res.max_abs <= tol_eff) {
      rec.status = SolveStatus::Converged;
      break;
    }
    // Clamp slack 0: genuinely interior tuples (however close to the cone
    // boundary) must get the exact gradient or Newton degrades to a linear
    // rate; the assembly's own roundoff floor still guards exact-boundary
    // tuples.
    const CoefficientField coeff =
        assemble_linearization(p.fspec, p.gamma, rec.u, 0.0);
    grid::GridField neg_res(p.grid, 0.0);
    for (long f : coeff.interior) neg_res.values[f] = -res.value.values[f];
    const long budget = 200 * static_cast<long>(p.grid.m) + 2000;
    const LinearSolveRecord lin = linear_solve(coeff, neg_res, 1e-10, budget);

    double s = 1.0;
    bool accepted = false;
    while (s >= step_floor) {
      grid::GridField trial = rec.u;
      for (long f : coeff.interior) trial.values[f] += s * lin.x.values[f];
      const double trial_slack = problem::admissibility_slack(trial);
      const Residual trial_res = residual(p.fspec, p.gamma, trial, rhs, trial_slack);
      // Strict interiority: an iterate on the closure plateau (f = 0, flat in
      // the outward direction) starves Newton of curvature information, so
      // overshoots past the cone boundary are damped away instead.
      if (trial_res.min_sigma > 0.0 &&
          trial_res.max_abs <= (1.0 - 0.25 * s) * res.max_abs) {
        rec.u = std::move(trial);
        res = trial_res;
        slack = trial_slack;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted) {
      rec.status = SolveStatus::LineSearchStalled;
      break;
    }
    ++rec.iterations;
    rec.trace.push_back({eps_tag, iter, res.max_abs, s, lin.iterations,
                         res.min_sigma, res.cone_violations});
  }
  if (res.max_abs <= tol_eff) rec.status = SolveStatus::Converged;
  rec.final_residual = res.max_abs;
  return rec;
}

ContinuityRecord continuity_solve(const problem::ProblemSpec& p) {
  p.validate();

  ContinuityRecord rec;
  rec.sub = problem::auto_subsolution(p);
  const grid::GridField psi_field = grid::sample(p.grid, p.psi);

  problem::Regularizer reg;
  if (rec.sub.eps0 > 0.0) {
    reg = problem::build_eta(rec.sub.eps0);
    rec.schedule = p.schedule.materialize(rec.sub.eps0);
  } else {
    rec.schedule = {0.0};
  }

  grid::GridField u = rec.sub.field;
  for (double eps : rec.schedule) {
    const grid::GridField rhs =
        (eps > 0.0) ? problem::regularized_rhs(psi_field, eps, reg) : psi_field;
    SolveRecord stage = newton_solve(p, rhs, u, p.newton, eps);
    const bool ok = stage.status == SolveStatus::Converged;
    u = stage.u;
    rec.stages.push_back(std::move(stage));
    if (!ok) break;
  }
  return rec;
}

}  // namespace hessolve::solver
