#include "hessolve/symfunc.hpp"

#include <cmath>
#include <cstdio>

namespace hessolve::symfunc {

namespace {

// e[0..kmax] <- elementary symmetric functions of the tuple, truncated at kmax.
void esf_prefix(std::span<const double> lambda, int kmax, double* e) {
  for (int j = 1; j <= kmax; ++j) e[j] = 0.0;
  e[0] = 1.0;
  int seen = 0;
  for (double x : lambda) {
    ++seen;
    const int top = std::min(kmax, seen);
    for (int j = top; j >= 1; --j) e[j] += x * e[j - 1];
  }
}

// Elementary symmetric functions of the tuple with entry `skip` removed.
void esf_excluding(std::span<const double> lambda, int skip, int kmax, double* e) {
  for (int j = 1; j <= kmax; ++j) e[j] = 0.0;
  e[0] = 1.0;
  int seen = 0;
  for (int i = 0; i < static_cast<int>(lambda.size()); ++i) {
    if (i == skip) continue;
    ++seen;
    const int top = std::min(kmax, seen);
    for (int j = top; j >= 1; --j) e[j] += lambda[i] * e[j - 1];
  }
}

double boundary_tol(const SymmetricFunctionSpec& spec, std::span<const double> lambda) {
  double norm = 0.0;
  for (double x : lambda) norm += x * x;
  norm = std::sqrt(norm);
  return 1e-12 * (1.0 + std::pow(norm, spec.k));
}

double f_from_sigmas(const SymmetricFunctionSpec& spec, const double* e) {
  if (spec.kind == FKind::SigmaRoot) {
    return std::pow(e[spec.k], 1.0 / spec.k);
  }
  return std::pow(e[spec.k] / e[spec.l], 1.0 / (spec.k - spec.l));
}

}  // namespace

SymmetricFunctionSpec SymmetricFunctionSpec::sigma_root(int k, int n) {
  SymmetricFunctionSpec s{FKind::SigmaRoot, k, 0, n};
  s.validate();
  return s;
}

SymmetricFunctionSpec SymmetricFunctionSpec::quotient(int k, int l, int n) {
  SymmetricFunctionSpec s{FKind::Quotient, k, l, n};
  s.validate();
  return s;
}

void SymmetricFunctionSpec::validate() const {
  if (n < 2 || n > kMaxDim) throw InvalidSpec("tuple dimension n must be in [2, 8]");
  if (kind == FKind::SigmaRoot) {
    if (k < 1 || k > n) throw InvalidSpec("sigma_root requires 1 <= k <= n");
  } else {
    if (l < 1 || l >= k || k > n) throw InvalidSpec("quotient requires 1 <= l < k <= n");
  }
}

std::string SymmetricFunctionSpec::describe() const {
  char buf[64];
  if (kind == FKind::SigmaRoot) {
    std::snprintf(buf, sizeof buf, "sigma_root(%d) n=%d", k, n);
  } else {
    std::snprintf(buf, sizeof buf, "quotient(%d,%d) n=%d", k, l, n);
  }
  return buf;
}

double sigma_k(std::span<const double> lambda, int k) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1 || n > kMaxDim) throw InvalidSpec("sigma_k: tuple dimension out of range");
  if (k < 0 || k > n) throw InvalidSpec("sigma_k: order k must lie in [0, n]");
  if (k == 0) return 1.0;
  double e[kMaxDim + 1];
  esf_prefix(lambda, k, e);
  return e[k];
}

bool in_cone(std::span<const double> lambda, int k, double tol) {
  const int n = static_cast<int>(lambda.size());
  if (n < 1 || n > kMaxDim) throw InvalidSpec("in_cone: tuple dimension out of range");
  if (k < 1 || k > n) throw InvalidSpec("in_cone: order k must lie in [1, n]");
  double e[kMaxDim + 1];
  esf_prefix(lambda, k, e);
  for (int j = 1; j <= k; ++j) {
    if (!(e[j] > tol)) return false;
  }
  return true;
}

ConeEval evaluate_closure(const SymmetricFunctionSpec& spec,
                          std::span<const double> lambda) {
  spec.validate();
  if (static_cast<int>(lambda.size()) != spec.n) {
    throw InvalidInput("evaluate_closure: tuple length does not match spec.n");
  }
  double e[kMaxDim + 1];
  esf_prefix(lambda, spec.k, e);
  double min_sigma = e[1];
  for (int j = 2; j <= spec.k; ++j) min_sigma = std::min(min_sigma, e[j]);

  const double tol = boundary_tol(spec, lambda);
  ConeEval ev;
  ev.min_sigma = min_sigma;
  ev.in_open_cone = min_sigma > tol;
  ev.in_closed_cone = min_sigma >= -tol;
  ev.value = ev.in_open_cone ? f_from_sigmas(spec, e) : 0.0;
  return ev;
}

double f_eval(const SymmetricFunctionSpec& spec, std::span<const double> lambda) {
  const ConeEval ev = evaluate_closure(spec, lambda);
  if (ev.in_open_cone) return ev.value;
  if (ev.in_closed_cone) return 0.0;
  throw NotInCone("f_eval: tuple outside the closed admissible cone (min sigma = " +
                  std::to_string(ev.min_sigma) + ")");
}

SmallVec f_grad(const SymmetricFunctionSpec& spec, std::span<const double> lambda) {
  spec.validate();
  if (static_cast<int>(lambda.size()) != spec.n) {
    throw InvalidInput("f_grad: tuple length does not match spec.n");
  }
  double e[kMaxDim + 1];
  esf_prefix(lambda, spec.k, e);
  const double tol = boundary_tol(spec, lambda);
  for (int j = 1; j <= spec.k; ++j) {
    if (!(e[j] > tol)) {
      throw NotInCone("f_grad: tuple is not a strict interior point of the cone");
    }
  }

  const double f = f_from_sigmas(spec, e);
  SmallVec g(spec.n);
  double er[kMaxDim + 1];
  if (spec.kind == FKind::SigmaRoot) {
    // d sigma_k / d lambda_i = sigma_{k-1} of the reduced tuple.
    for (int i = 0; i < spec.n; ++i) {
      esf_excluding(lambda, i, spec.k - 1, er);
      g[i] = f * er[spec.k - 1] / (spec.k * e[spec.k]);
    }
  } else {
    const double inv_kl = 1.0 / (spec.k - spec.l);
    for (int i = 0; i < spec.n; ++i) {
      esf_excluding(lambda, i, spec.k - 1, er);
      const double dk = er[spec.k - 1] / e[spec.k];
      const double dl = er[spec.l - 1] / e[spec.l];
      g[i] = f * (dk - dl) * inv_kl;
    }
  }
  return g;
}

SmallVec normal_vector(const SymmetricFunctionSpec& spec,
                       std::span<const double> lambda) {
  SmallVec g = f_grad(spec, lambda);
  const double norm = g.norm2();
  if (!(norm > 0.0)) throw NotInCone("normal_vector: vanishing gradient");
  for (int i = 0; i < g.size(); ++i) g[i] /= norm;
  return g;
}

double beta_of(std::span<const double> nu) {
  const int n = static_cast<int>(nu.size());
  if (n < 2 || n > kMaxDim) throw InvalidSpec("beta_of: dimension out of range");
  double norm2 = 0.0;
  double lo = nu[0];
  for (double x : nu) {
    if (!(x > 0.0)) throw InvalidSpec("beta_of: all components must be positive");
    norm2 += x * x;
    lo = std::min(lo, x);
  }
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-8) {
    throw InvalidSpec("beta_of: input must be a unit vector");
  }
  return std::min(0.5 * lo, 0.5 / std::sqrt(static_cast<double>(n)));
}

GradientGap gradient_gap(const SymmetricFunctionSpec& spec,
                         std::span<const double> mu,
                         std::span<const double> lambda) {
  const SmallVec nu_mu = normal_vector(spec, mu);
  const SmallVec nu_lambda = normal_vector(spec, lambda);
  const SmallVec g = f_grad(spec, lambda);

  GradientGap gap;
  gap.beta = beta_of(nu_mu.span());
  gap.normal_distance = (nu_mu - nu_lambda).norm2();
  gap.hypothesis_active = gap.normal_distance >= gap.beta;
  gap.f_sum = g.sum();
  double lhs = 0.0;
  for (int i = 0; i < spec.n; ++i) lhs += g[i] * (mu[i] - lambda[i]);
  gap.lhs = lhs;
  return gap;
}

}  // namespace hessolve::symfunc
