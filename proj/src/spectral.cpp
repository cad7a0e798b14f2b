#include "hessolve/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace hessolve::spectral {

double SymMatrix::frob_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * (*this)(i, j);
  return std::sqrt(s);
}

double SymMatrix::dot(const SymMatrix& other) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += (*this)(i, j) * other(i, j);
  return s;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) set(i, j, (*this)(i, j) + other(i, j));
  return *this;
}

SymMatrix& SymMatrix::operator*=(double s) {
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) set(i, j, (*this)(i, j) * s);
  return *this;
}

void SymMatrix::require_finite(const char* who) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (!std::isfinite((*this)(i, j)))
        throw InvalidInput(std::string(who) + ": non-finite matrix entry");
}

SymMatrix operator+(SymMatrix a, const SymMatrix& b) {
  a += b;
  return a;
}

SymMatrix operator*(double s, SymMatrix a) {
  a *= s;
  return a;
}

namespace {

double offdiag_norm(const double* a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * a[i * n + j] * a[i * n + j];
  return std::sqrt(s);
}

}  // namespace

EigenDecomp eigen_sym(const SymMatrix& m) {
  const int n = m.dim();
  if (n < 1 || n > kMaxDim) throw InvalidInput("eigen_sym: dimension out of range");
  m.require_finite("eigen_sym");

  double a[kMaxDim * kMaxDim];
  double q[kMaxDim * kMaxDim];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i * n + j] = m(i, j);
      q[i * n + j] = (i == j) ? 1.0 : 0.0;
    }

  const double target = 1e-14 * m.frob_norm();
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps && offdiag_norm(a, n) > target; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int r = p + 1; r < n; ++r) {
        const double apr = a[p * n + r];
        if (apr == 0.0) continue;
        // Stable computation of the rotation annihilating a[p][r].
        const double theta = (a[r * n + r] - a[p * n + p]) / (2.0 * apr);
        const double t = (theta >= 0.0)
                             ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                             : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        for (int i = 0; i < n; ++i) {
          const double aip = a[i * n + p];
          const double air = a[i * n + r];
          a[i * n + p] = c * aip - s * air;
          a[i * n + r] = s * aip + c * air;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = a[p * n + j];
          const double arj = a[r * n + j];
          a[p * n + j] = c * apj - s * arj;
          a[r * n + j] = s * apj + c * arj;
        }
        for (int i = 0; i < n; ++i) {
          const double qip = q[i * n + p];
          const double qir = q[i * n + r];
          q[i * n + p] = c * qip - s * qir;
          q[i * n + r] = s * qip + c * qir;
        }
      }
    }
  }

  // Ascending eigenvalue order with matching eigenvector columns.
  int order[kMaxDim];
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order, order + n,
            [&](int x, int y) { return a[x * n + x] < a[y * n + y]; });

  EigenDecomp d;
  d.n = n;
  d.lambda = SmallVec(n);
  for (int c = 0; c < n; ++c) {
    d.lambda[c] = a[order[c] * n + order[c]];
    for (int r = 0; r < n; ++r) d.q[r * n + c] = q[r * n + order[c]];
  }
  return d;
}

SymMatrix gamma_shift(const SymMatrix& hess, double gamma) {
  if (gamma < 0.0) throw InvalidSpec("gamma_shift: gamma must be nonnegative");
  SymMatrix u = hess;
  const double shift = gamma * hess.trace();
  for (int i = 0; i < u.dim(); ++i) u.add(i, i, shift);
  return u;
}

namespace {

SymMatrix from_eigenframe(const EigenDecomp& d, const SmallVec& diag) {
  SymMatrix f(d.n);
  for (int i = 0; i < d.n; ++i) {
    for (int j = i; j < d.n; ++j) {
      double s = 0.0;
      for (int c = 0; c < d.n; ++c) s += d.q_at(i, c) * diag[c] * d.q_at(j, c);
      f.set(i, j, s);
    }
  }
  return f;
}

}  // namespace

SymMatrix f_matrix(const symfunc::SymmetricFunctionSpec& spec, const SymMatrix& u) {
  if (u.dim() != spec.n) throw InvalidInput("f_matrix: matrix dimension does not match spec.n");
  const EigenDecomp d = eigen_sym(u);
  const SmallVec g = symfunc::f_grad(spec, d.lambda.span());
  return from_eigenframe(d, g);
}

SymMatrix linearization(const symfunc::SymmetricFunctionSpec& spec,
                        const SymMatrix& hess, double gamma) {
  const SymMatrix f = f_matrix(spec, gamma_shift(hess, gamma));
  SymMatrix lin = f;
  const double shift = gamma * f.trace();
  for (int i = 0; i < lin.dim(); ++i) lin.add(i, i, shift);
  return lin;
}

SymMatrix linearization_clamped(const symfunc::SymmetricFunctionSpec& spec,
                                const SymMatrix& hess, double gamma,
                                double cone_slack) {
  const SymMatrix u = gamma_shift(hess, gamma);
  const EigenDecomp d = eigen_sym(u);

  SmallVec lam = d.lambda;
  const double scale = 1.0 + std::max(std::abs(lam.min()), std::abs(lam.max()));
  const double margin = std::max(cone_slack, 1e-12) * scale + 1e-14;

  const auto shifted_in_cone = [&](double t) {
    SmallVec probe = lam;
    for (int i = 0; i < probe.size(); ++i) probe[i] += t;
    return symfunc::in_cone(probe.span(), spec.k, margin);
  };

  if (!shifted_in_cone(0.0)) {
    // Shift along the diagonal direction until strictly inside.  Membership
    // is monotone in the shift, so bisection on [0, t_hi] is safe.
    double t_hi = 2.0 * scale;
    while (!shifted_in_cone(t_hi)) {
      t_hi *= 2.0;
      if (t_hi > 1e12 * scale) {
        throw NotInCone("linearization_clamped: tuple unreachable from the cone");
      }
    }
    double t_lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      if (shifted_in_cone(mid)) {
        t_hi = mid;
      } else {
        t_lo = mid;
      }
    }
    const double t = t_hi + margin;
    for (int i = 0; i < lam.size(); ++i) lam[i] += t;
  }

  const SmallVec g = symfunc::f_grad(spec, lam.span());
  SymMatrix f = from_eigenframe(d, g);
  SymMatrix lin = f;
  const double shift = gamma * f.trace();
  for (int i = 0; i < lin.dim(); ++i) lin.add(i, i, shift);
  return lin;
}

}  // namespace hessolve::spectral
