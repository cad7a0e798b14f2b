#include <bit>
#include <cmath>
#include <random>

#include <doctest.h>

#include "hessolve/symfunc.hpp"

using namespace hessolve;
using symfunc::SymmetricFunctionSpec;

namespace {

double sigma_brute(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  double s = 0.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (std::popcount(mask) != k) continue;
    double p = 1.0;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) p *= lambda[i];
    }
    s += p;
  }
  return s;
}

}  // namespace

TEST_CASE("sigma_k matches subset enumeration on integer tuples") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coeff(-9, 9);
  for (int n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      double lambda[6];
      for (int i = 0; i < n; ++i) lambda[i] = coeff(rng);
      for (int k = 1; k <= n; ++k) {
        const double brute = sigma_brute({lambda, size_t(n)}, k);
        CHECK(symfunc::sigma_k({lambda, size_t(n)}, k) == brute);
      }
    }
  }
}

TEST_CASE("sigma_k matches subset enumeration on float tuples") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int n = 2; n <= 6; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      double lambda[6];
      for (int i = 0; i < n; ++i) lambda[i] = coeff(rng);
      for (int k = 1; k <= n; ++k) {
        const double brute = sigma_brute({lambda, size_t(n)}, k);
        const double got = symfunc::sigma_k({lambda, size_t(n)}, k);
        CHECK(std::abs(got - brute) <= 1e-12 * std::max(1.0, std::abs(brute)));
      }
    }
  }
}

TEST_CASE("cone membership and closure evaluation") {
  const double inside[2] = {1.0, 1.0};
  const double outside[2] = {1.0, -2.0};
  CHECK(symfunc::in_cone({inside, 2}, 2, 0.0));
  CHECK_FALSE(symfunc::in_cone({outside, 2}, 2, 0.0));

  const SymmetricFunctionSpec ma = SymmetricFunctionSpec::sigma_root(2, 2);
  const double boundary[2] = {1.0, 0.0};
  const symfunc::ConeEval ce = symfunc::evaluate_closure(ma, {boundary, 2});
  CHECK(ce.in_closed_cone);
  CHECK_FALSE(ce.in_open_cone);
  CHECK(ce.value == 0.0);

  CHECK_THROWS_AS(symfunc::f_eval(ma, {outside, 2}), NotInCone);
}

TEST_CASE("spec validation rejects bad orders") {
  CHECK_THROWS_AS(SymmetricFunctionSpec::sigma_root(0, 2).validate(), InvalidSpec);
  CHECK_THROWS_AS(SymmetricFunctionSpec::sigma_root(3, 2).validate(), InvalidSpec);
  CHECK_THROWS_AS(SymmetricFunctionSpec::quotient(2, 2, 3).validate(), InvalidSpec);
  CHECK_THROWS_AS(SymmetricFunctionSpec::quotient(1, 0, 3).validate(), InvalidSpec);
  CHECK_NOTHROW(SymmetricFunctionSpec::quotient(3, 1, 3).validate());
}

TEST_CASE("f_grad matches central differences at interior points") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> coeff(0.5, 3.0);
  const SymmetricFunctionSpec specs[] = {
      SymmetricFunctionSpec::sigma_root(1, 3),
      SymmetricFunctionSpec::sigma_root(2, 3),
      SymmetricFunctionSpec::sigma_root(3, 3),
      SymmetricFunctionSpec::quotient(2, 1, 3),
      SymmetricFunctionSpec::quotient(3, 1, 3),
  };
  for (const SymmetricFunctionSpec& spec : specs) {
    for (int trial = 0; trial < 50; ++trial) {
      double lambda[3];
      for (int i = 0; i < 3; ++i) lambda[i] = coeff(rng);
      const SmallVec g = symfunc::f_grad(spec, {lambda, 3});
      for (int i = 0; i < 3; ++i) {
        CHECK(g[i] > 0.0);
        const double h = 1e-6;
        double hi[3] = {lambda[0], lambda[1], lambda[2]};
        double lo[3] = {lambda[0], lambda[1], lambda[2]};
        hi[i] += h;
        lo[i] -= h;
        const double fd =
            (symfunc::f_eval(spec, {hi, 3}) - symfunc::f_eval(spec, {lo, 3})) /
            (2.0 * h);
        CHECK(std::abs(g[i] - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("degree-one homogeneity") {
  std::mt19937 rng(10);
  std::uniform_real_distribution<double> coeff(0.1, 2.0);
  const SymmetricFunctionSpec spec = SymmetricFunctionSpec::sigma_root(2, 3);
  for (int trial = 0; trial < 100; ++trial) {
    double lambda[3];
    for (int i = 0; i < 3; ++i) lambda[i] = coeff(rng);
    const double f = symfunc::f_eval(spec, {lambda, 3});
    for (double t : {0.5, 2.0, 7.0}) {
      double scaled[3] = {t * lambda[0], t * lambda[1], t * lambda[2]};
      const double ft = symfunc::f_eval(spec, {scaled, 3});
      CHECK(std::abs(ft - t * f) <= 1e-12 * (1.0 + std::abs(t * f)));
    }
  }
}

TEST_CASE("normal_vector is unit length with positive components") {
  const SymmetricFunctionSpec spec = SymmetricFunctionSpec::sigma_root(2, 3);
  const double lambda[3] = {3.0, 1.0, 0.5};
  const SmallVec nu = symfunc::normal_vector(spec, {lambda, 3});
  double norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    CHECK(nu[i] > 0.0);
    norm += nu[i] * nu[i];
  }
  CHECK(std::abs(std::sqrt(norm) - 1.0) <= 1e-12);
}

TEST_CASE("beta_of caps at the simplex direction") {
  const double uniform[2] = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  CHECK(symfunc::beta_of({uniform, 2}) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))));
  const double skewed[2] = {0.99, std::sqrt(1.0 - 0.99 * 0.99)};
  const double beta = symfunc::beta_of({skewed, 2});
  CHECK(beta > 0.0);
  CHECK(beta <= 0.5 * std::sqrt(1.0 - 0.99 * 0.99) + 1e-15);
}

TEST_CASE("gradient gap: equal tuples are inactive, separated tuples positive") {
  const SymmetricFunctionSpec spec = SymmetricFunctionSpec::sigma_root(2, 2);
  const double lam[2] = {1.0, 1.0};
  const symfunc::GradientGap same = symfunc::gradient_gap(spec, {lam, 2}, {lam, 2});
  CHECK_FALSE(same.hypothesis_active);
  CHECK(same.normal_distance == doctest::Approx(0.0));

  // mu has much larger value and a strongly rotated normal.
  const double mu[2] = {9.0, 1.0};
  const double lam2[2] = {0.2, 1.4};
  const symfunc::GradientGap gg = symfunc::gradient_gap(spec, {mu, 2}, {lam2, 2});
  CHECK(symfunc::f_eval(spec, {mu, 2}) >= symfunc::f_eval(spec, {lam2, 2}));
  if (gg.hypothesis_active) {
    CHECK(gg.lhs > 0.0);
    CHECK(gg.theta_hat() > 0.0);
  }
}
