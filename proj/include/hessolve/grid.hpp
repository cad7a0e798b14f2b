#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hessolve/errors.hpp"
#include "hessolve/spectral.hpp"

namespace hessolve::grid {

/// Coordinates of one node (unused trailing entries are zero).
using Coord = std::array<double, 3>;

/// Uniform tensor grid over the box [0, extents[0]] x ... with m nodes per
/// axis (boundary included), so the spacing on axis a is extents[a] / (m-1).
struct Grid {
  int dim = 2;                       ///< 2 or 3
  std::array<double, 3> extents{};   ///< per-axis box lengths, positive
  int m = 5;                         ///< nodes per axis, >= 5

  void validate() const;

  double spacing(int axis) const { return extents[axis] / (m - 1); }
  double min_spacing() const;
  long nodes() const;

  long flat(const std::array<int, 3>& idx) const {
    long f = idx[0];
    for (int a = 1; a < dim; ++a) f = f * m + idx[a];
    return f;
  }

  std::array<int, 3> unflat(long flat_index) const;

  Coord coords(const std::array<int, 3>& idx) const {
    Coord x{};
    for (int a = 0; a < dim; ++a) x[a] = idx[a] * spacing(a);
    return x;
  }

  /// All indices at least `margin` layers away from every face.
  bool is_within_margin(const std::array<int, 3>& idx, int margin) const {
    for (int a = 0; a < dim; ++a) {
      if (idx[a] < margin || idx[a] > m - 1 - margin) return false;
    }
    return true;
  }

  bool is_interior(const std::array<int, 3>& idx) const {
    return is_within_margin(idx, 1);
  }

  bool is_boundary(const std::array<int, 3>& idx) const {
    return !is_interior(idx);
  }

  bool same(const Grid& other) const {
    return dim == other.dim && m == other.m && extents == other.extents;
  }

  Coord center() const {
    Coord c{};
    for (int a = 0; a < dim; ++a) c[a] = 0.5 * extents[a];
    return c;
  }

  /// Circumradius of the box (half of its diagonal).
  double circumradius() const;
};

/// Visits every node at least `margin` layers inside the boundary (margin 0
/// visits everything).
template <typename F>
void for_each_margin_node(const Grid& g, int margin, F&& f) {
  std::array<int, 3> idx{};
  const long lo = margin, end = static_cast<long>(g.m) - margin;  // exclusive
  if (g.dim == 2) {
    for (long i0 = lo; i0 < end; ++i0)
      for (long i1 = lo; i1 < end; ++i1) {
        idx = {static_cast<int>(i0), static_cast<int>(i1), 0};
        f(idx, g.flat(idx));
      }
  } else {
    for (long i0 = lo; i0 < end; ++i0)
      for (long i1 = lo; i1 < end; ++i1)
        for (long i2 = lo; i2 < end; ++i2) {
          idx = {static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i2)};
          f(idx, g.flat(idx));
        }
  }
}

/// Visits every node as (idx, flat).
template <typename F>
void for_each_node(const Grid& g, F&& f) {
  for_each_margin_node(g, 0, std::forward<F>(f));
}

template <typename F>
void for_each_interior_node(const Grid& g, F&& f) {
  for_each_margin_node(g, 1, std::forward<F>(f));
}

/// Scalar field of nodal values in row-major order (axis 0 slowest).
struct GridField {
  Grid grid;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const Grid& g, double fill = 0.0)
      : grid(g), values(static_cast<size_t>(g.nodes()), fill) {}

  double& at(const std::array<int, 3>& idx) { return values[grid.flat(idx)]; }
  double at(const std::array<int, 3>& idx) const { return values[grid.flat(idx)]; }

  double max_abs() const;
  double min_value() const;
  double max_value() const;
};

using Sampler = std::function<double(const Coord&)>;

/// Evaluates a pointwise function at every node.
GridField sample(const Grid& g, const Sampler& f);

/// Centered second-difference Hessian at an interior node: diagonal entries
/// from three-point differences, off-diagonal from the symmetric four-point
/// cross stencil.  Exact on quadratics.  Boundary node -> InvalidIndex.
spectral::SymMatrix hessian_fd(const GridField& u, const std::array<int, 3>& idx);

/// Sum of the three-point second differences (the 5/7-point Laplacian).
double laplacian_fd(const GridField& u, const std::array<int, 3>& idx);

/// Centered first-difference gradient at an interior node.
Coord gradient_fd(const GridField& u, const std::array<int, 3>& idx);

/// The nonlinear operator evaluated nodewise with the closure extension.
struct OperatorField {
  GridField value;                  ///< f(lambda(U)) at interior nodes, 0 on the ring
  std::vector<std::uint8_t> mask;   ///< 1 where lambda(U) is not in the open cone (tol-tested)
  long flagged = 0;                 ///< number of mask hits
  double min_sigma = 0.0;           ///< worst sigma_j(lambda(U)) over interior nodes
};

/// Evaluates f(lambda(D2u + gamma tr(D2u) I)) at every interior node.  Cone
/// violations are reported through the mask (tested against `tol`), never
/// thrown; masked nodes carry the closure value 0.
OperatorField apply_operator(const symfunc::SymmetricFunctionSpec& spec,
                             double gamma, const GridField& u, double tol);

/// Discrete-harmonic extension of ring data: solves laplacian = 0 at interior
/// nodes with the boundary ring copied from `boundary_data`, to a final
/// max-norm Laplacian residual below 2e-13 * (1 + max |ring data|) / h^2.
GridField harmonic_solve(const Grid& g, const GridField& boundary_data);
GridField harmonic_solve(const Grid& g, const Sampler& phi);

/// Node region selector for curvature scans.
struct Region {
  /// Number of layers stripped from every face; must leave the centered
  /// Hessian stencil valid (margin >= 1).
  int margin = 1;

  static Region all() { return Region{1}; }
  static Region interior(int margin) { return Region{margin}; }
};

/// max over region nodes of the spectral radius of hessian_fd.
/// Empty region -> InvalidIndex.
double max_second_difference(const GridField& u, const Region& region);

/// JSON round-trip ("grid" header plus row-major "values").
std::string to_json(const GridField& f);
GridField field_from_json(const std::string& text);
void write_json_file(const GridField& f, const std::string& path);
GridField read_json_file(const std::string& path);

/// CSV export: one coordinate tuple and value per row, row-major order.
void write_csv_file(const GridField& f, const std::string& path);

}  // namespace hessolve::grid
