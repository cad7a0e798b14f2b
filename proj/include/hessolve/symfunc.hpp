#pragma once

#include <span>
#include <string>

#include "hessolve/errors.hpp"
#include "hessolve/smallvec.hpp"

namespace hessolve::symfunc {

/// Which curvature function family the solver runs on.
enum class FKind {
  SigmaRoot,  ///< f = sigma_k^(1/k)
  Quotient,   ///< f = (sigma_k / sigma_l)^(1/(k-l)), 1 <= l < k
};

/// Parameters of one symmetric curvature function f on n eigenvalues.
/// The admissible cone is the k-th Garding cone
///   Gamma_k = { lambda : sigma_j(lambda) > 0 for j = 1..k },
/// on which f is positive, monotone in every component, concave, and
/// homogeneous of degree one.
struct SymmetricFunctionSpec {
  FKind kind = FKind::SigmaRoot;
  int k = 1;
  int l = 0;  ///< only meaningful for Quotient
  int n = 2;  ///< tuple dimension

  static SymmetricFunctionSpec sigma_root(int k, int n);
  static SymmetricFunctionSpec quotient(int k, int l, int n);

  /// Throws InvalidSpec unless (kind, k, l, n) is a supported combination.
  void validate() const;

  /// Short human-readable tag, e.g. "sigma_root(2) n=2".
  std::string describe() const;
};

/// k-th elementary symmetric function of the tuple.  sigma_0 = 1.
/// Computed by the stable prefix-polynomial recurrence, never by
/// subset enumeration.  Throws InvalidSpec for k outside [0, n].
double sigma_k(std::span<const double> lambda, int k);

/// True when sigma_j(lambda) > tol for every j = 1..k.
/// tol < 0 tests membership in a slightly enlarged cone (closure slack).
bool in_cone(std::span<const double> lambda, int k, double tol);

/// Cone position and closure-extended value of f at one tuple.
struct ConeEval {
  double value = 0.0;      ///< f(lambda), or 0 on/outside the cone boundary
  bool in_open_cone = false;
  bool in_closed_cone = false;  ///< within the scale-aware boundary tolerance
  double min_sigma = 0.0;       ///< min over j<=k of sigma_j(lambda)
};

/// Evaluates f with the closure extension and never throws: strictly inside
/// the cone the exact formula is used; within tolerance of the boundary the
/// value is 0; outside, value 0 with both membership flags false.
ConeEval evaluate_closure(const SymmetricFunctionSpec& spec,
                          std::span<const double> lambda);

/// f(lambda).  Returns 0 on the cone boundary (closure extension) and throws
/// NotInCone for tuples beyond the boundary tolerance.
double f_eval(const SymmetricFunctionSpec& spec, std::span<const double> lambda);

/// Componentwise gradient of f.  Requires a strict interior point; all
/// components are positive there.  Throws NotInCone otherwise.
SmallVec f_grad(const SymmetricFunctionSpec& spec, std::span<const double> lambda);

/// Unit gradient direction nu = Df/|Df|.
SmallVec normal_vector(const SymmetricFunctionSpec& spec,
                       std::span<const double> lambda);

/// Largest beta with nu - 2*beta*(1,...,1) still componentwise positive,
/// capped at 1/(2*sqrt(n)).  Requires a unit vector with positive components.
double beta_of(std::span<const double> nu);

/// Quantified gradient inequality between two admissible tuples.
struct GradientGap {
  bool hypothesis_active = false;  ///< |nu_mu - nu_lambda| >= beta_of(nu_mu)
  double lhs = 0.0;                ///< sum_i f_i(lambda) (mu_i - lambda_i)
  double f_sum = 0.0;              ///< sum_i f_i(lambda)
  double normal_distance = 0.0;
  double beta = 0.0;

  double theta_hat() const { return lhs / (1.0 + f_sum); }
};

/// Evaluates the gradient-gap inequality data for tuples mu, lambda in the
/// open cone.  When the normals of mu and lambda are separated by at least
/// beta_of(nu_mu) and f(mu) >= f(lambda), concavity plus degree-one
/// homogeneity force lhs > 0; callers assert positivity, not a magnitude.
GradientGap gradient_gap(const SymmetricFunctionSpec& spec,
                         std::span<const double> mu,
                         std::span<const double> lambda);

}  // namespace hessolve::symfunc
