#include "hessolve/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace hessolve::verify {

namespace {

double ring_max_abs(const grid::GridField& u) {
  double r = 0.0;
  grid::for_each_node(u.grid, [&](const std::array<int, 3>& idx, long flat) {
    if (u.grid.is_boundary(idx)) r = std::max(r, std::abs(u.values[flat]));
  });
  return r;
}

/// Gate for gradient evaluations: strictly inside the cone with margin at
/// least the scale-aware boundary tolerance the gradient itself enforces.
bool strictly_interior(const symfunc::SymmetricFunctionSpec& spec,
                       const SmallVec& lambda) {
  const double tol = 2e-12 * (1.0 + std::pow(lambda.norm2(), spec.k));
  return symfunc::in_cone(lambda.span(), spec.k, tol);
}

}  // namespace

ComparisonReport comparison_check(const grid::GridField& u,
                                  const grid::GridField& lower,
                                  const grid::GridField& upper, double slack) {
  if (!u.grid.same(lower.grid) || !u.grid.same(upper.grid)) {
    throw InvalidInput("comparison_check: fields live on different grids");
  }
  ComparisonReport r;
  r.slack = slack;
  r.min_above_lower = std::numeric_limits<double>::infinity();
  r.min_below_upper = std::numeric_limits<double>::infinity();
  const long n = u.grid.nodes();
  for (long i = 0; i < n; ++i) {
    const double above = u.values[i] - lower.values[i];
    const double below = upper.values[i] - u.values[i];
    if (above < r.min_above_lower) {
      r.min_above_lower = above;
      r.worst_lower_node = i;
    }
    if (below < r.min_below_upper) {
      r.min_below_upper = below;
      r.worst_upper_node = i;
    }
  }
  r.pass = r.min_above_lower >= -slack && r.min_below_upper >= -slack;
  return r;
}

double comparison_slack(const grid::GridField& u) {
  const double h = u.grid.min_spacing();
  return 10.0 * h * h * (1.0 + ring_max_abs(u));
}

AdmissibilityReport admissibility_check(const symfunc::SymmetricFunctionSpec& spec,
                                        double gamma, const grid::GridField& u) {
  AdmissibilityReport r;
  r.tol = problem::admissibility_slack(u);
  const grid::OperatorField op = grid::apply_operator(spec, gamma, u, -r.tol);
  r.violations = op.flagged;
  r.worst_sigma = op.min_sigma;
  r.laplacian_min = std::numeric_limits<double>::infinity();
  const double trace_factor = 1.0 + spec.n * gamma;
  grid::for_each_interior_node(u.grid, [&](const std::array<int, 3>& idx, long) {
    r.laplacian_min =
        std::min(r.laplacian_min, trace_factor * grid::laplacian_fd(u, idx));
  });
  r.pass = r.violations == 0 && r.laplacian_min >= -trace_factor * r.tol;
  return r;
}

EllipticityReport ellipticity_check(const symfunc::SymmetricFunctionSpec& spec,
                                    double gamma, const grid::GridField& u) {
  EllipticityReport r;
  r.lambda_min = std::numeric_limits<double>::infinity();
  r.lambda_max = -std::numeric_limits<double>::infinity();
  r.min_trace_f = std::numeric_limits<double>::infinity();
  const double slack = problem::admissibility_slack(u);
  const double trace_factor = 1.0 + spec.n * gamma;
  grid::for_each_interior_node(u.grid, [&](const std::array<int, 3>& idx, long) {
    const spectral::SymMatrix hess = grid::hessian_fd(u, idx);
    const spectral::SymMatrix c =
        spectral::linearization_clamped(spec, hess, gamma, slack);
    const spectral::EigenDecomp eig = spectral::eigen_sym(c);
    r.lambda_min = std::min(r.lambda_min, eig.lambda[0]);
    r.lambda_max = std::max(r.lambda_max, eig.lambda[spec.n - 1]);
    r.min_trace_f = std::min(r.min_trace_f, c.trace() / trace_factor);
  });
  r.pass = r.lambda_min > 0.0;
  return r;
}

GradientGapReport gradient_gap_check(const symfunc::SymmetricFunctionSpec& spec,
                                     double gamma, const grid::GridField& u,
                                     const grid::GridField& lower) {
  if (!u.grid.same(lower.grid)) {
    throw InvalidInput("gradient_gap_check: fields live on different grids");
  }
  GradientGapReport r;
  double min_theta = std::numeric_limits<double>::infinity();
  grid::for_each_interior_node(u.grid, [&](const std::array<int, 3>& idx, long) {
    ++r.total;
    const spectral::EigenDecomp mu = spectral::eigen_sym(
        spectral::gamma_shift(grid::hessian_fd(lower, idx), gamma));
    const spectral::EigenDecomp lam = spectral::eigen_sym(
        spectral::gamma_shift(grid::hessian_fd(u, idx), gamma));
    if (!strictly_interior(spec, mu.lambda) ||
        !strictly_interior(spec, lam.lambda)) {
      ++r.skipped;
      return;
    }
    const symfunc::GradientGap gg =
        symfunc::gradient_gap(spec, mu.lambda.span(), lam.lambda.span());
    if (!gg.hypothesis_active) return;
    ++r.active;
    min_theta = std::min(min_theta, gg.theta_hat());
  });
  r.min_theta = r.active > 0 ? min_theta : 0.0;
  r.activation_fraction =
      r.total > 0 ? static_cast<double>(r.active) / static_cast<double>(r.total)
                  : 0.0;
  r.pass = r.active == 0 || r.min_theta > 0.0;
  return r;
}

void BarrierConstants::validate() const {
  const bool positive = a1 > 0.0 && a2 > 0.0 && a3 > 0.0 && a4 > 0.0 &&
                        t > 0.0 && big_n > 0.0 && delta > 0.0 && k > 0.0;
  if (!positive) throw InvalidInput("barrier constants must all be positive");
  if (!(a1 > 2.0 * a2)) {
    throw InvalidInput("barrier constants require a1 > 2 a2");
  }
}

void BoundaryPatch::validate(const grid::Grid& g) const {
  if (axis < 0 || axis >= g.dim) throw InvalidInput("patch axis out of range");
  if (side != 0 && side != 1) throw InvalidInput("patch side must be 0 or 1");
  int j = 0;
  for (int a = 0; a < g.dim; ++a) {
    if (a == axis) continue;
    if (!(0.0 < tang_lo[j] && tang_lo[j] < tang_hi[j] &&
          tang_hi[j] < g.extents[a])) {
      throw InvalidInput("patch tangential interval must lie strictly inside the face");
    }
    ++j;
  }
}

double BoundaryPatch::distance(const grid::Grid& g, const grid::Coord& x) const {
  return side == 0 ? x[axis] : g.extents[axis] - x[axis];
}

bool BoundaryPatch::tangential_inside(const grid::Grid& g,
                                      const grid::Coord& x) const {
  int j = 0;
  for (int a = 0; a < g.dim; ++a) {
    if (a == axis) continue;
    if (x[a] < tang_lo[j] || x[a] > tang_hi[j]) return false;
    ++j;
  }
  return true;
}

namespace {

/// First difference of `f` along `axis`: centered inside, one-sided on the
/// grid faces, so the result is defined at every node.
double first_difference(const grid::GridField& f, std::array<int, 3> idx,
                        int axis) {
  const double h = f.grid.spacing(axis);
  std::array<int, 3> lo = idx, hi = idx;
  if (idx[axis] == 0) {
    hi[axis] += 1;
    return (f.at(hi) - f.at(idx)) / h;
  }
  if (idx[axis] == f.grid.m - 1) {
    lo[axis] -= 1;
    return (f.at(idx) - f.at(lo)) / h;
  }
  lo[axis] -= 1;
  hi[axis] += 1;
  return (f.at(hi) - f.at(lo)) / (2.0 * h);
}

/// Sum over tangential axes of |grad_l (u - phi)|^2, defined at every node.
grid::GridField tangential_slope_field(const grid::GridField& u,
                                       const grid::GridField& phi_field,
                                       int normal_axis) {
  grid::GridField diff(u.grid);
  for (size_t i = 0; i < diff.values.size(); ++i) {
    diff.values[i] = u.values[i] - phi_field.values[i];
  }
  grid::GridField s(u.grid);
  grid::for_each_node(u.grid, [&](const std::array<int, 3>& idx, long flat) {
    double acc = 0.0;
    for (int a = 0; a < u.grid.dim; ++a) {
      if (a == normal_axis) continue;
      const double d = first_difference(diff, idx, a);
      acc += d * d;
    }
    s.values[flat] = acc;
  });
  return s;
}

/// Per-node ingredients of the barrier margin; the margin is affine in the
/// constants, so one pass of operator applications serves every combination.
struct BarrierNodeData {
  long flat = 0;
  std::array<int, 3> idx{};
  double dist = 0.0;    ///< coordinate distance to the patch face
  double lw = 0.0;      ///< L (u - lower)
  double ls = 0.0;      ///< L (tangential slope sum)
  double c_aa = 0.0;    ///< normal-normal linearization coefficient
  double trace_c = 0.0;
  double sum_f = 0.0;
};

std::vector<BarrierNodeData> barrier_band_data(
    const symfunc::SymmetricFunctionSpec& spec, double gamma,
    const grid::GridField& u, const grid::GridField& lower,
    const grid::GridField& phi_field, const BoundaryPatch& patch,
    double max_delta) {
  const grid::Grid& g = u.grid;
  const double slack = problem::admissibility_slack(u);
  const double trace_factor = 1.0 + spec.n * gamma;

  grid::GridField w(g);
  for (size_t i = 0; i < w.values.size(); ++i) {
    w.values[i] = u.values[i] - lower.values[i];
  }
  const grid::GridField s = tangential_slope_field(u, phi_field, patch.axis);

  std::vector<BarrierNodeData> band;
  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const grid::Coord x = g.coords(idx);
    const double dist = patch.distance(g, x);
    if (dist >= max_delta || !patch.tangential_inside(g, x)) return;
    BarrierNodeData d;
    d.flat = flat;
    d.idx = idx;
    d.dist = dist;
    const spectral::SymMatrix c = spectral::linearization_clamped(
        spec, grid::hessian_fd(u, idx), gamma, slack);
    d.lw = c.dot(grid::hessian_fd(w, idx));
    d.ls = c.dot(grid::hessian_fd(s, idx));
    d.c_aa = c(patch.axis, patch.axis);
    d.trace_c = c.trace();
    d.sum_f = d.trace_c / trace_factor;
    band.push_back(d);
  });
  return band;
}

/// L Psi + k (1 + sum F^ii) at one precomputed node.  The distance term is
/// affine (L(t d) = 0 for centered differences), d^2 and |x|^2 are quadratic,
/// so their operator images reduce to single linearization entries.
double barrier_margin_value(const BarrierNodeData& d, const BarrierConstants& c) {
  const double inv_d2 = 1.0 / (c.delta * c.delta);
  return (c.a1 * inv_d2 - c.a2) * d.lw - c.big_n * inv_d2 * d.c_aa +
         2.0 * c.a3 * inv_d2 * d.trace_c - c.a4 * d.ls +
         c.k * (1.0 + d.sum_f);
}

}  // namespace

BarrierReport barrier_margin(const symfunc::SymmetricFunctionSpec& spec,
                             double gamma, const grid::GridField& u,
                             const grid::GridField& lower,
                             const grid::GridField& phi_field,
                             const BarrierConstants& consts,
                             const BoundaryPatch& patch) {
  consts.validate();
  patch.validate(u.grid);
  if (!u.grid.same(lower.grid) || !u.grid.same(phi_field.grid)) {
    throw InvalidInput("barrier_margin: fields live on different grids");
  }
  const std::vector<BarrierNodeData> band =
      barrier_band_data(spec, gamma, u, lower, phi_field, patch, consts.delta);

  BarrierReport r;
  r.margin = grid::GridField(u.grid);
  r.worst = -std::numeric_limits<double>::infinity();
  for (const BarrierNodeData& d : band) {
    const double m = barrier_margin_value(d, consts);
    r.margin.values[d.flat] = m;
    r.band.push_back(d.flat);
    if (m <= 0.0) ++r.nonpositive;
    r.worst = std::max(r.worst, m);
  }
  if (r.band.empty()) {
    r.worst = 0.0;
    r.fraction = 0.0;
    r.pass = false;
    return r;
  }
  r.fraction = static_cast<double>(r.nonpositive) / static_cast<double>(r.band.size());
  r.pass = r.fraction >= 0.99;
  return r;
}

BarrierSearchResult barrier_search(const symfunc::SymmetricFunctionSpec& spec,
                                   double gamma, const grid::GridField& u,
                                   const grid::GridField& lower,
                                   const grid::GridField& phi_field,
                                   const BoundaryPatch& patch) {
  patch.validate(u.grid);
  static constexpr double kA1[] = {1e2, 1e3, 1e4, 1e5, 1e6};
  static constexpr double kA3[] = {1e-2, 1.0, 1e2};
  static constexpr double kA4[] = {1e-2, 1.0, 1e2};
  static constexpr double kBigN[] = {1e2, 1e3, 1e4, 1e5};
  static constexpr double kDelta[] = {0.05, 0.1, 0.2};
  static constexpr double kK[] = {1.0, 10.0};

  double max_delta = 0.0;
  for (double d : kDelta) max_delta = std::max(max_delta, d);
  const std::vector<BarrierNodeData> data =
      barrier_band_data(spec, gamma, u, lower, phi_field, patch, max_delta);

  BarrierSearchResult out;
  double best_fraction = -1.0;
  double best_worst = std::numeric_limits<double>::infinity();
  for (double delta : kDelta) {
    std::vector<const BarrierNodeData*> band;
    for (const BarrierNodeData& d : data) {
      if (d.dist < delta) band.push_back(&d);
    }
    if (band.empty()) continue;
    for (double a1 : kA1)
      for (double a3 : kA3)
        for (double a4 : kA4)
          for (double big_n : kBigN)
            for (int thalf = 0; thalf < 2; ++thalf)
              for (double k : kK) {
                BarrierConstants c;
                c.a1 = a1;
                c.a2 = 0.25 * a1;
                c.a3 = a3;
                c.a4 = a4;
                c.big_n = big_n;
                c.t = (thalf == 0 ? 0.5 : 1.0) * big_n * delta;
                c.delta = delta;
                c.k = k;
                ++out.combos;
                long nonpos = 0;
                double worst = -std::numeric_limits<double>::infinity();
                for (const BarrierNodeData* d : band) {
                  const double m = barrier_margin_value(*d, c);
                  if (m <= 0.0) ++nonpos;
                  worst = std::max(worst, m);
                }
                const double fraction = static_cast<double>(nonpos) /
                                        static_cast<double>(band.size());
                if (fraction > best_fraction ||
                    (fraction == best_fraction && worst < best_worst)) {
                  best_fraction = fraction;
                  best_worst = worst;
                  out.best = c;
                }
              }
  }
  if (best_fraction >= 0.0) {
    out.report = barrier_margin(spec, gamma, u, lower, phi_field, out.best, patch);
    out.found = out.report.pass;
  }
  return out;
}

void TauSpec::validate() const {
  if (n < 2 || n > kMaxDim) throw InvalidInput("rotation field dimension out of range");
  if (a.size() != n) throw InvalidInput("rotation field offset has wrong dimension");
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(tval(i, j)));
  const double tol = 1e-12 * (1.0 + scale);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (std::abs(tval(i, j) + tval(j, i)) > tol) {
        throw InvalidInput("rotation generator must be skew-symmetric");
      }
    }
  }
}

SmallVec TauSpec::tau_at(const grid::Coord& x) const {
  SmallVec r(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = a[i];
    for (int j = 0; j < n; ++j) acc += tval(i, j) * x[j];
    r[i] = acc;
  }
  return r;
}

RotationConcavityReport rotation_concavity_check(
    const symfunc::SymmetricFunctionSpec& spec, double gamma,
    const grid::GridField& u, const TauSpec& tau, double c_test) {
  tau.validate();
  if (tau.n != spec.n || tau.n != u.grid.dim) {
    throw InvalidInput("rotation field dimension does not match the problem");
  }
  const grid::Grid& g = u.grid;
  const double slack = problem::admissibility_slack(u);
  const grid::OperatorField op = grid::apply_operator(spec, gamma, u, -slack);

  // w = tau' (D2u) tau + <T tau, grad u>, the twice-differentiated field of
  // the left-hand side; defined on the interior, zero on the ring.
  grid::GridField w(g);
  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const spectral::SymMatrix hess = grid::hessian_fd(u, idx);
    const grid::Coord grad = grid::gradient_fd(u, idx);
    const SmallVec tv = tau.tau_at(g.coords(idx));
    double acc = 0.0;
    for (int i = 0; i < tau.n; ++i) {
      for (int j = 0; j < tau.n; ++j) acc += tv[i] * tv[j] * hess(i, j);
      double rot = 0.0;
      for (int j = 0; j < tau.n; ++j) rot += tau.tval(i, j) * tv[j];
      acc += rot * grad[i];
    }
    w.values[flat] = acc;
  });

  RotationConcavityReport r;
  r.min_margin = std::numeric_limits<double>::infinity();
  const double h = g.min_spacing();
  r.tol = c_test * h * h;
  grid::for_each_margin_node(g, 2, [&](const std::array<int, 3>& idx, long) {
    const spectral::SymMatrix c = spectral::linearization_clamped(
        spec, grid::hessian_fd(u, idx), gamma, slack);
    const double lhs = c.dot(grid::hessian_fd(w, idx));

    const spectral::SymMatrix hg = grid::hessian_fd(op.value, idx);
    const grid::Coord gg = grid::gradient_fd(op.value, idx);
    const SmallVec tv = tau.tau_at(g.coords(idx));
    double rhs = 0.0;
    for (int i = 0; i < tau.n; ++i) {
      for (int j = 0; j < tau.n; ++j) rhs += tv[i] * tv[j] * hg(i, j);
      double rot = 0.0;
      for (int j = 0; j < tau.n; ++j) rot += tau.tval(i, j) * tv[j];
      rhs += rot * gg[i];
    }
    r.min_margin = std::min(r.min_margin, lhs - rhs);
    ++r.nodes;
  });
  if (r.nodes == 0) r.min_margin = 0.0;
  r.pass = r.min_margin >= -r.tol;
  return r;
}

namespace {

/// Hessian at a face node away from edges: one-sided 4-point stencil along
/// the inward normal, centered stencils tangentially, and a one-sided-of-
/// centered mix for the normal-tangential entries.
spectral::SymMatrix boundary_hessian(const grid::GridField& u,
                                     const std::array<int, 3>& idx, int axis,
                                     int side) {
  const grid::Grid& g = u.grid;
  const int step = side == 0 ? 1 : -1;
  const double ha = g.spacing(axis);
  spectral::SymMatrix b(g.dim);

  auto layer = [&](int j) {
    std::array<int, 3> p = idx;
    p[axis] += j * step;
    return p;
  };

  b.set(axis, axis,
        (2.0 * u.at(layer(0)) - 5.0 * u.at(layer(1)) + 4.0 * u.at(layer(2)) -
         u.at(layer(3))) /
            (ha * ha));

  auto tang_diff = [&](const std::array<int, 3>& p, int t) {
    std::array<int, 3> lo = p, hi = p;
    lo[t] -= 1;
    hi[t] += 1;
    return (u.at(hi) - u.at(lo)) / (2.0 * g.spacing(t));
  };

  for (int t = 0; t < g.dim; ++t) {
    if (t == axis) continue;
    std::array<int, 3> lo = idx, hi = idx;
    lo[t] -= 1;
    hi[t] += 1;
    const double ht = g.spacing(t);
    b.set(t, t, (u.at(hi) - 2.0 * u.at(idx) + u.at(lo)) / (ht * ht));

    const double g0 = tang_diff(layer(0), t);
    const double g1 = tang_diff(layer(1), t);
    const double g2 = tang_diff(layer(2), t);
    b.set(axis, t, step * (-3.0 * g0 + 4.0 * g1 - g2) / (2.0 * ha));
  }

  if (g.dim == 3) {
    int t1 = -1, t2 = -1;
    for (int t = 0; t < 3; ++t) {
      if (t == axis) continue;
      (t1 < 0 ? t1 : t2) = t;
    }
    std::array<int, 3> pp = idx, pm = idx, mp = idx, mm = idx;
    pp[t1] += 1; pp[t2] += 1;
    pm[t1] += 1; pm[t2] -= 1;
    mp[t1] -= 1; mp[t2] += 1;
    mm[t1] -= 1; mm[t2] -= 1;
    b.set(t1, t2,
          (u.at(pp) - u.at(pm) - u.at(mp) + u.at(mm)) /
              (4.0 * g.spacing(t1) * g.spacing(t2)));
  }
  return b;
}

double spectral_radius(const spectral::SymMatrix& m, int n) {
  const spectral::EigenDecomp eig = spectral::eigen_sym(m);
  return std::max(std::abs(eig.lambda[0]), std::abs(eig.lambda[n - 1]));
}

}  // namespace

FieldStats field_stats(const grid::GridField& u) {
  const grid::Grid& g = u.grid;
  FieldStats st;

  grid::for_each_interior_node(g, [&](const std::array<int, 3>& idx, long) {
    const grid::Coord grad = grid::gradient_fd(u, idx);
    double n2 = 0.0;
    for (int a = 0; a < g.dim; ++a) n2 += grad[a] * grad[a];
    st.c1_norm = std::max(st.c1_norm, std::sqrt(n2));
    st.c2_global = std::max(st.c2_global, spectral_radius(grid::hessian_fd(u, idx), g.dim));
  });

  const int box_margin =
      std::max(1, static_cast<int>(std::lround(0.25 * (g.m - 1))));
  grid::for_each_margin_node(g, box_margin, [&](const std::array<int, 3>& idx, long) {
    st.c2_interior =
        std::max(st.c2_interior, spectral_radius(grid::hessian_fd(u, idx), g.dim));
  });

  grid::for_each_node(g, [&](const std::array<int, 3>& idx, long) {
    int extreme_axis = -1, extreme_count = 0;
    bool tangential_ok = true;
    for (int a = 0; a < g.dim; ++a) {
      if (idx[a] == 0 || idx[a] == g.m - 1) {
        extreme_axis = a;
        ++extreme_count;
      } else if (idx[a] < 1 || idx[a] > g.m - 2) {
        tangential_ok = false;
      }
    }
    if (extreme_count != 1 || !tangential_ok) return;  // corners and edges excluded
    const int side = idx[extreme_axis] == 0 ? 0 : 1;
    st.c2_boundary = std::max(
        st.c2_boundary,
        spectral_radius(boundary_hessian(u, idx, extreme_axis, side), g.dim));
  });
  return st;
}

namespace {

struct SweepRun {
  bool threw = false;
  std::string error;
  solver::ContinuityRecord record;
};

void sweep_one(const problem::ProblemSpec& base, double gamma, SweepRun& out) {
  try {
    problem::ProblemSpec p = base;
    p.gamma = gamma;
    p.validate();
    out.record = solver::continuity_solve(p);
  } catch (const std::exception& e) {
    out.threw = true;
    out.error = e.what();
  }
}

}  // namespace

SweepTable estimate_sweep(const problem::ProblemSpec& base,
                          std::span<const double> gammas, int threads) {
  const size_t n = gammas.size();
  std::vector<SweepRun> runs(n);

  const int want = std::clamp<int>(threads, 1, static_cast<int>(std::max<size_t>(n, 1)));
  if (want <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) sweep_one(base, gammas[i], runs[i]);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&]() {
      for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
        sweep_one(base, gammas[i], runs[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < want; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepTable table;
  for (size_t i = 0; i < n; ++i) {
    GammaSummary gs;
    gs.gamma = gammas[i];
    if (runs[i].threw) {
      SweepCell cell;
      cell.gamma = gammas[i];
      cell.status = runs[i].error;
      table.cells.push_back(std::move(cell));
      table.summary.push_back(gs);
      continue;
    }
    const solver::ContinuityRecord& rec = runs[i].record;
    gs.eps0 = rec.sub.eps0;
    gs.converged = rec.converged();
    const size_t first_cell = table.cells.size();
    for (const solver::SolveRecord& stage : rec.stages) {
      SweepCell cell;
      cell.gamma = gammas[i];
      cell.eps = stage.eps;
      cell.iterations = stage.iterations;
      cell.status = solver::to_string(stage.status);
      cell.solved = stage.status == solver::SolveStatus::Converged;
      if (cell.solved) cell.stats = field_stats(stage.u);
      table.cells.push_back(std::move(cell));
    }
    std::vector<const SweepCell*> solved;
    for (size_t c = first_cell; c < table.cells.size(); ++c) {
      if (table.cells[c].solved) solved.push_back(&table.cells[c]);
    }
    if (solved.size() >= 2) {
      const SweepCell* last = solved.back();
      const SweepCell* prev = solved[solved.size() - 2];
      if (prev->stats.c2_global > 0.0) {
        gs.c2_stability_ratio = last->stats.c2_global / prev->stats.c2_global;
      }
      if (prev->stats.c1_norm > 0.0) {
        gs.c1_stability_ratio = last->stats.c1_norm / prev->stats.c1_norm;
      }
    } else if (solved.size() == 1) {
      gs.c2_stability_ratio = 1.0;
      gs.c1_stability_ratio = 1.0;
    }
    if (!solved.empty()) {
      const FieldStats& fs = solved.back()->stats;
      gs.boundary_ratio = fs.c2_global / (1.0 + fs.c2_boundary);
    }
    table.summary.push_back(gs);
  }
  return table;
}

DiagnosticsReport run_diagnostics(const symfunc::SymmetricFunctionSpec& spec,
                                  double gamma, const grid::GridField& u,
                                  const grid::GridField& lower,
                                  const grid::GridField& upper) {
  DiagnosticsReport r;
  r.comparison = comparison_check(u, lower, upper, comparison_slack(u));
  r.admissibility = admissibility_check(spec, gamma, u);
  r.ellipticity = ellipticity_check(spec, gamma, u);
  r.gradient_gap = gradient_gap_check(spec, gamma, u, lower);
  r.stats = field_stats(u);
  r.all_pass = r.comparison.pass && r.admissibility.pass && r.ellipticity.pass &&
               r.gradient_gap.pass;
  return r;
}

}  // namespace hessolve::verify
