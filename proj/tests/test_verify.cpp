#include <cmath>
#include <vector>

#include <doctest.h>

#include "hessolve/verify.hpp"

using namespace hessolve;
using grid::Coord;

namespace {

const auto kSigma2 = symfunc::SymmetricFunctionSpec::sigma_root(2, 2);

grid::GridField isotropic_quadratic(const grid::Grid& g, double a) {
  return grid::sample(g, [a](const Coord& x) {
    return 0.5 * a * (x[0] * x[0] + x[1] * x[1]);
  });
}

problem::ProblemSpec tilted_spec(int m) {
  problem::ProblemSpec p;
  p.fspec = kSigma2;
  p.gamma = 0.5;
  p.grid = grid::Grid{2, {1.0, 1.0, 0.0}, m};
  p.psi = [](const Coord& x) { return 1.0 + x[0]; };
  p.phi = [](const Coord& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
  return p;
}

}  // namespace

TEST_CASE("comparison_check locates the worst nodes") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const grid::GridField u = isotropic_quadratic(g, 1.0);
  grid::GridField lower = u, upper = u;
  for (double& v : lower.values) v -= 0.1;
  for (double& v : upper.values) v += 0.1;

  verify::ComparisonReport ok = verify::comparison_check(u, lower, upper, 0.0);
  CHECK(ok.pass);
  CHECK(ok.min_above_lower == doctest::Approx(0.1));
  CHECK(ok.min_below_upper == doctest::Approx(0.1));

  grid::GridField bad = u;
  const long node = g.flat({8, 8, 0});
  bad.values[node] += 1.0;  // punches through the upper bound
  verify::ComparisonReport r = verify::comparison_check(bad, lower, upper, 0.0);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_upper_node == node);
  CHECK(r.min_below_upper == doctest::Approx(-0.9));
  // A slack wider than the violation masks it again.
  CHECK(verify::comparison_check(bad, lower, upper, 1.0).pass);

  bad.values[node] -= 2.0;
  r = verify::comparison_check(bad, lower, upper, 0.0);
  CHECK_FALSE(r.pass);
  CHECK(r.worst_lower_node == node);
}

TEST_CASE("comparison_slack scales with the ring data") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const double h = g.spacing(0);
  const grid::GridField u = isotropic_quadratic(g, 1.0);  // ring max 1
  CHECK(verify::comparison_slack(u) == doctest::Approx(10.0 * h * h * 2.0));
}

TEST_CASE("admissibility_check accepts the quadratic and flags a spike") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  grid::GridField u = isotropic_quadratic(g, 1.0);
  verify::AdmissibilityReport ok = verify::admissibility_check(kSigma2, 0.5, u);
  CHECK(ok.pass);
  CHECK(ok.violations == 0);
  CHECK(ok.worst_sigma == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(ok.laplacian_min == doctest::Approx(4.0).epsilon(1e-9));

  u.values[g.flat({8, 8, 0})] += 0.5;  // concave spike
  verify::AdmissibilityReport r = verify::admissibility_check(kSigma2, 0.5, u);
  CHECK_FALSE(r.pass);
  CHECK(r.violations > 0);
  CHECK(r.worst_sigma < 0.0);
}

TEST_CASE("ellipticity_check on the isotropic quadratic") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const grid::GridField u = isotropic_quadratic(g, 1.0);
  const verify::EllipticityReport r = verify::ellipticity_check(kSigma2, 0.5, u);
  CHECK(r.pass);
  CHECK(r.lambda_min == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.lambda_max == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.min_trace_f == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gradient_gap_check activation regimes") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const long interior = 15 * 15;

  // Identical fields: strictly interior but never separated -> vacuous pass.
  const grid::GridField lower = isotropic_quadratic(g, 2.0);
  verify::GradientGapReport same =
      verify::gradient_gap_check(kSigma2, 0.5, lower, lower);
  CHECK(same.pass);
  CHECK(same.total == interior);
  CHECK(same.skipped == 0);
  CHECK(same.active == 0);
  CHECK(same.min_theta == 0.0);

  // Affine u: curvature tuple on the cone boundary -> every node skipped.
  const grid::GridField affine = grid::sample(g, [](const Coord& x) {
    return 0.3 * x[0] - 0.2 * x[1];
  });
  verify::GradientGapReport sk =
      verify::gradient_gap_check(kSigma2, 0.5, affine, lower);
  CHECK(sk.pass);
  CHECK(sk.skipped == interior);
  CHECK(sk.active == 0);

  // Strongly anisotropic u below an isotropic lower: normals separate beyond
  // the threshold at every node and the gap is uniformly positive.
  const grid::GridField aniso = grid::sample(g, [](const Coord& x) {
    return 0.05 * x[0] * x[0] + 1.0 * x[1] * x[1];
  });
  verify::GradientGapReport act =
      verify::gradient_gap_check(kSigma2, 0.5, aniso, lower);
  CHECK(act.pass);
  CHECK(act.skipped == 0);
  CHECK(act.active == interior);
  CHECK(act.activation_fraction == doctest::Approx(1.0));
  CHECK(act.min_theta > 0.1);
}

TEST_CASE("barrier constants and patch validation") {
  verify::BarrierConstants c;
  CHECK_NOTHROW(c.validate());
  c.a2 = 0.6;  // violates a1 > 2 a2
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = verify::BarrierConstants{};
  c.a3 = 0.0;
  CHECK_THROWS_AS(c.validate(), InvalidInput);
  c = verify::BarrierConstants{};
  c.delta = -0.1;
  CHECK_THROWS_AS(c.validate(), InvalidInput);

  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  verify::BoundaryPatch p;  // degenerate tangential interval
  CHECK_THROWS_AS(p.validate(g), InvalidInput);
  p.tang_lo[0] = 0.25;
  p.tang_hi[0] = 0.75;
  CHECK_NOTHROW(p.validate(g));
  CHECK(p.distance(g, {0.5, 0.0625, 0.0}) == doctest::Approx(0.0625));
  CHECK(p.tangential_inside(g, {0.5, 0.0, 0.0}));
  CHECK_FALSE(p.tangential_inside(g, {0.1, 0.0, 0.0}));

  p.tang_lo[0] = 0.0;  // touches the box edge
  CHECK_THROWS_AS(p.validate(g), InvalidInput);
  p.tang_lo[0] = 0.25;
  p.side = 1;
  CHECK_NOTHROW(p.validate(g));
  CHECK(p.distance(g, {0.5, 0.9375, 0.0}) == doctest::Approx(0.0625));
}

TEST_CASE("barrier_margin sign structure on the exact quadratic") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const grid::GridField u = isotropic_quadratic(g, 1.0);
  const grid::GridField phi_field = u;  // u solves with its own ring data
  const grid::GridField lower = u;      // w = u - lower vanishes identically

  verify::BoundaryPatch patch;
  patch.tang_lo[0] = 0.25;
  patch.tang_hi[0] = 0.75;

  // Dominant -big_n d^2 term: margin sinks below zero across the whole band.
  verify::BarrierConstants strong;
  strong.big_n = 1000.0;
  const verify::BarrierReport neg =
      verify::barrier_margin(kSigma2, 0.5, u, lower, phi_field, strong, patch);
  CHECK(neg.pass);
  CHECK(!neg.band.empty());
  CHECK(neg.fraction == doctest::Approx(1.0));
  CHECK(neg.worst < -1e4);
  for (long f : neg.band) CHECK(neg.margin.values[f] < 0.0);

  // Defaults: the a3 |x|^2 term dominates and the margin stays positive.
  const verify::BarrierReport pos = verify::barrier_margin(
      kSigma2, 0.5, u, lower, phi_field, verify::BarrierConstants{}, patch);
  CHECK_FALSE(pos.pass);
  CHECK(pos.fraction == doctest::Approx(0.0));
  CHECK(pos.worst > 0.0);
}

TEST_CASE("barrier_search certifies the exact quadratic") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const grid::GridField u = isotropic_quadratic(g, 1.0);
  verify::BoundaryPatch patch;
  patch.tang_lo[0] = 0.25;
  patch.tang_hi[0] = 0.75;
  const verify::BarrierSearchResult r =
      verify::barrier_search(kSigma2, 0.5, u, u, u, patch);
  CHECK(r.found);
  CHECK(r.report.pass);
  CHECK(r.combos > 0);
  CHECK(r.combos <= 10000);
  CHECK_NOTHROW(r.best.validate());
}

TEST_CASE("rotation field validation and evaluation") {
  verify::TauSpec tau;
  tau.n = 2;
  tau.a = SmallVec(2, 0.0);
  tau.t[0 * 2 + 1] = 1.0;
  tau.t[1 * 2 + 0] = -1.0;
  CHECK_NOTHROW(tau.validate());

  const SmallVec v = tau.tau_at({0.25, 0.5, 0.0});
  CHECK(v[0] == doctest::Approx(0.5));
  CHECK(v[1] == doctest::Approx(-0.25));

  tau.t[1 * 2 + 0] = -0.5;  // not skew any more
  CHECK_THROWS_AS(tau.validate(), InvalidInput);
  tau.t[1 * 2 + 0] = -1.0;
  tau.a = SmallVec(3, 0.0);
  CHECK_THROWS_AS(tau.validate(), InvalidInput);
}

TEST_CASE("rotation_concavity margin vanishes on the quadratic") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 17};
  const grid::GridField u = isotropic_quadratic(g, 1.0);
  verify::TauSpec tau;
  tau.n = 2;
  tau.a = SmallVec{0.3, -0.1};
  tau.t[0 * 2 + 1] = 1.0;
  tau.t[1 * 2 + 0] = -1.0;

  const verify::RotationConcavityReport r =
      verify::rotation_concavity_check(kSigma2, 0.5, u, tau, 5.0);
  CHECK(r.pass);
  CHECK(r.nodes == 13 * 13);
  CHECK(r.tol == doctest::Approx(5.0 * g.spacing(0) * g.spacing(0)));
  CHECK(std::abs(r.min_margin) <= 1e-9);
}

TEST_CASE("field_stats on an anisotropic quadratic") {
  const grid::Grid g{2, {1.0, 1.0, 0.0}, 33};
  const double h = g.spacing(0);
  const grid::GridField u = grid::sample(g, [](const Coord& x) {
    return 0.5 * (x[0] * x[0] + 3.0 * x[1] * x[1]);
  });
  const verify::FieldStats s = verify::field_stats(u);
  const double gmax = (1.0 - h) * std::sqrt(10.0);
  CHECK(s.c1_norm == doctest::Approx(gmax).epsilon(1e-10));
  CHECK(s.c2_interior == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(s.c2_global == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(s.c2_boundary == doctest::Approx(3.0).epsilon(1e-7));
}

TEST_CASE("estimate_sweep tabulates stages per gamma") {
  const problem::ProblemSpec base = tilted_spec(17);
  const std::vector<double> gammas{0.5, 0.5};  // duplicates must not collide
  const verify::SweepTable t = verify::estimate_sweep(base, gammas, 2);

  REQUIRE(t.summary.size() == 2);
  REQUIRE(t.cells.size() == 14);
  for (int run = 0; run < 2; ++run) {
    const verify::GammaSummary& s = t.summary[run];
    CHECK(s.converged);
    CHECK(s.gamma == 0.5);
    CHECK(s.eps0 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(s.c2_stability_ratio > 0.5);
    CHECK(s.c2_stability_ratio < 2.0);
    CHECK(s.c1_stability_ratio > 0.5);
    CHECK(s.c1_stability_ratio < 2.0);
    CHECK(s.boundary_ratio > 0.0);
    for (int j = 0; j < 7; ++j) {
      const verify::SweepCell& cell = t.cells[run * 7 + j];
      CHECK(cell.gamma == 0.5);
      CHECK(cell.solved);
      CHECK(cell.iterations >= 0);
      if (j > 0) {
        CHECK(cell.eps == doctest::Approx(t.cells[run * 7 + j - 1].eps / 4.0));
      }
    }
  }
}

TEST_CASE("run_diagnostics composes the mandatory checks") {
  const problem::ProblemSpec p = tilted_spec(17);
  const solver::ContinuityRecord rec = solver::continuity_solve(p);
  REQUIRE(rec.converged());

  grid::GridField ring(p.grid, 0.0);
  grid::for_each_node(p.grid, [&](const std::array<int, 3>& idx, long f) {
    if (p.grid.is_boundary(idx)) ring.values[f] = p.phi(p.grid.coords(idx));
  });
  const grid::GridField upper = grid::harmonic_solve(p.grid, ring);

  const verify::DiagnosticsReport d = verify::run_diagnostics(
      p.fspec, p.gamma, rec.last().u, rec.sub.field, upper);
  CHECK(d.all_pass);
  CHECK(d.comparison.pass);
  CHECK(d.admissibility.pass);
  CHECK(d.ellipticity.pass);
  CHECK(d.gradient_gap.pass);
  CHECK(d.stats.c1_norm > 0.0);
}
