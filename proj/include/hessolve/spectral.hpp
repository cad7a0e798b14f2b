#pragma once

#include <array>

#include "hessolve/errors.hpp"
#include "hessolve/smallvec.hpp"
#include "hessolve/symfunc.hpp"

namespace hessolve::spectral {

/// Dense symmetric matrix of dimension n <= kMaxDim.  Symmetry is maintained
/// by construction: set(i, j, v) writes both triangles.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n) { a_.fill(0.0); }

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  int dim() const { return n_; }

  double operator()(int i, int j) const { return a_[i * n_ + j]; }

  void set(int i, int j, double v) {
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  void add(int i, int j, double v) { set(i, j, (*this)(i, j) + v); }

  double trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double frob_norm() const;

  /// Componentwise Frobenius inner product <A, B>.
  double dot(const SymMatrix& other) const;

  SymMatrix& operator+=(const SymMatrix& other);
  SymMatrix& operator*=(double s);

  /// Throws InvalidInput when any entry is not finite.
  void require_finite(const char* who) const;

 private:
  std::array<double, kMaxDim * kMaxDim> a_{};
  int n_ = 0;
};

SymMatrix operator+(SymMatrix a, const SymMatrix& b);
SymMatrix operator*(double s, SymMatrix a);

/// Eigen decomposition A = Q diag(lambda) Q^T with lambda ascending and the
/// columns of Q the matching orthonormal eigenvectors.
struct EigenDecomp {
  SmallVec lambda;
  std::array<double, kMaxDim * kMaxDim> q{};  // row-major; column c = eigenvector c
  int n = 0;

  double q_at(int r, int c) const { return q[r * n + c]; }
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// 1e-14 * ||A||_F (one exact rotation suffices for n = 2).  Reconstruction
/// Q diag(lambda) Q^T matches A to 1e-12 * ||A|| and Q^T Q = I to 1e-12.
EigenDecomp eigen_sym(const SymMatrix& a);

/// U = H + gamma * tr(H) * I, the curvature matrix the operator acts on.
/// gamma < 0 throws InvalidSpec.
SymMatrix gamma_shift(const SymMatrix& hess, double gamma);

/// Gradient of f at U as a matrix: shares U's eigenframe and carries
/// f_grad(lambda(U)) on the diagonal.  Requires lambda(U) strictly inside
/// the cone (NotInCone otherwise).
SymMatrix f_matrix(const symfunc::SymmetricFunctionSpec& spec, const SymMatrix& u);

/// Full derivative of the composed map u -> f(lambda(D2u + gamma tr(D2u) I))
/// with respect to the Hessian entries:
///   linearization = F + gamma * tr(F) * I,  F = f_matrix(spec, U).
/// Positive definite on admissible input; its smallest eigenvalue is at
/// least gamma * tr(F).
SymMatrix linearization(const symfunc::SymmetricFunctionSpec& spec,
                        const SymMatrix& hess, double gamma);

/// Shared assembly helper for solver and diagnostics: like linearization,
/// but a tuple within `cone_slack` of the cone boundary is first shifted
/// along (1,...,1) to a strict interior point before the gradient is taken
/// (the gradient is degree-zero homogeneous, so the radial limit is the
/// natural value there).  Never throws for tuples in the closed cone.
SymMatrix linearization_clamped(const symfunc::SymmetricFunctionSpec& spec,
                                const SymMatrix& hess, double gamma,
                                double cone_slack);

}  // namespace hessolve::spectral
