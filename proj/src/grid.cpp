#include "hessolve/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace hessolve::grid {

void Grid::validate() const {
  if (dim != 2 && dim != 3) throw InvalidSpec("grid: dim must be 2 or 3");
  if (m < 5) throw InvalidSpec("grid: need at least 5 nodes per axis");
  if (m > 2049) throw InvalidSpec("grid: at most 2049 nodes per axis");
  for (int a = 0; a < dim; ++a) {
    if (!(extents[a] > 0.0) || !std::isfinite(extents[a])) {
      throw InvalidSpec("grid: extents must be positive and finite");
    }
  }
}

double Grid::min_spacing() const {
  double h = spacing(0);
  for (int a = 1; a < dim; ++a) h = std::min(h, spacing(a));
  return h;
}

long Grid::nodes() const {
  long n = 1;
  for (int a = 0; a < dim; ++a) n *= m;
  return n;
}

std::array<int, 3> Grid::unflat(long flat_index) const {
  std::array<int, 3> idx{};
  for (int a = dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat_index % m);
    flat_index /= m;
  }
  return idx;
}

double Grid::circumradius() const {
  double s = 0.0;
  for (int a = 0; a < dim; ++a) s += 0.25 * extents[a] * extents[a];
  return std::sqrt(s);
}

double GridField::max_abs() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

double GridField::min_value() const {
  return *std::min_element(values.begin(), values.end());
}

double GridField::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

GridField sample(const Grid& g, const Sampler& f) {
  g.validate();
  GridField out(g);
  for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    out.values[flat] = f(g.coords(idx));
  });
  return out;
}

namespace {

std::array<int, 3> shifted(std::array<int, 3> idx, int axis, int step) {
  idx[axis] += step;
  return idx;
}

void require_interior(const Grid& g, const std::array<int, 3>& idx, const char* who) {
  for (int a = 0; a < g.dim; ++a) {
    if (idx[a] < 1 || idx[a] > g.m - 2) {
      throw InvalidIndex(std::string(who) + ": node is not interior");
    }
  }
}

}  // namespace

spectral::SymMatrix hessian_fd(const GridField& u, const std::array<int, 3>& idx) {
  const Grid& g = u.grid;
  require_interior(g, idx, "hessian_fd");
  spectral::SymMatrix h(g.dim);
  const double uc = u.at(idx);
  for (int a = 0; a < g.dim; ++a) {
    const double ha = g.spacing(a);
    const double daa =
        (u.at(shifted(idx, a, +1)) - 2.0 * uc + u.at(shifted(idx, a, -1))) / (ha * ha);
    h.set(a, a, daa);
    for (int b = a + 1; b < g.dim; ++b) {
      const double hb = g.spacing(b);
      const double dab = (u.at(shifted(shifted(idx, a, +1), b, +1)) -
                          u.at(shifted(shifted(idx, a, +1), b, -1)) -
                          u.at(shifted(shifted(idx, a, -1), b, +1)) +
                          u.at(shifted(shifted(idx, a, -1), b, -1))) /
                         (4.0 * ha * hb);
      h.set(a, b, dab);
    }
  }
  return h;
}

double laplacian_fd(const GridField& u, const std::array<int, 3>& idx) {
  const Grid& g = u.grid;
  require_interior(g, idx, "laplacian_fd");
  const double uc = u.at(idx);
  double lap = 0.0;
  for (int a = 0; a < g.dim; ++a) {
    const double ha = g.spacing(a);
    lap += (u.at(shifted(idx, a, +1)) - 2.0 * uc + u.at(shifted(idx, a, -1))) / (ha * ha);
  }
  return lap;
}

Coord gradient_fd(const GridField& u, const std::array<int, 3>& idx) {
  const Grid& g = u.grid;
  require_interior(g, idx, "gradient_fd");
  Coord grad{};
  for (int a = 0; a < g.dim; ++a) {
    grad[a] = (u.at(shifted(idx, a, +1)) - u.at(shifted(idx, a, -1))) / (2.0 * g.spacing(a));
  }
  return grad;
}

OperatorField apply_operator(const symfunc::SymmetricFunctionSpec& spec,
                             double gamma, const GridField& u, double tol) {
  spec.validate();
  const Grid& g = u.grid;
  g.validate();
  if (spec.n != g.dim) throw InvalidInput("apply_operator: spec.n must equal grid dim");
  if (gamma < 0.0) throw InvalidSpec("apply_operator: gamma must be nonnegative");

  OperatorField out;
  out.value = GridField(g, 0.0);
  out.mask.assign(static_cast<size_t>(g.nodes()), 0);
  double min_sigma = std::numeric_limits<double>::infinity();

  for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const spectral::SymMatrix h = hessian_fd(u, idx);
    const spectral::SymMatrix uu = spectral::gamma_shift(h, gamma);
    const spectral::EigenDecomp d = spectral::eigen_sym(uu);
    const symfunc::ConeEval ev = symfunc::evaluate_closure(spec, d.lambda.span());
    out.value.values[flat] = ev.value;
    min_sigma = std::min(min_sigma, ev.min_sigma);
    if (!symfunc::in_cone(d.lambda.span(), spec.k, tol)) {
      out.mask[flat] = 1;
      ++out.flagged;
    }
  });
  out.min_sigma = min_sigma;
  return out;
}

namespace {

// Conjugate gradients on the interior unknowns of -laplacian w = b
// with homogeneous Dirichlet ring, matrix-free.
void neg_laplace_apply(const Grid& g, const std::vector<double>& w,
                       std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    double acc = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      const double h2 = g.spacing(a) * g.spacing(a);
      acc += (w[g.flat(shifted(idx, a, +1))] - 2.0 * w[flat] +
              w[g.flat(shifted(idx, a, -1))]) /
             h2;
    }
    out[flat] = -acc;
  });
}

double dot_interior(const Grid& g, const std::vector<double>& a,
                    const std::vector<double>& b) {
  double s = 0.0;
  for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
    s += a[flat] * b[flat];
  });
  return s;
}

double max_abs_interior(const Grid& g, const std::vector<double>& a) {
  double s = 0.0;
  for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
    s = std::max(s, std::abs(a[flat]));
  });
  return s;
}

}  // namespace

GridField harmonic_solve(const Grid& g, const GridField& boundary_data) {
  g.validate();
  if (!boundary_data.grid.same(g)) {
    throw InvalidInput("harmonic_solve: boundary data lives on a different grid");
  }

  // Lift: ring values in place, zero in the interior.
  GridField out(g, 0.0);
  double ring_max = 0.0;
  for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    if (g.is_boundary(idx)) {
      out.values[flat] = boundary_data.values[flat];
      ring_max = std::max(ring_max, std::abs(boundary_data.values[flat]));
    }
  });

  // b = laplacian of the lift at interior nodes; solve -lap w = b, add w.
  const size_t nn = out.values.size();
  std::vector<double> b(nn, 0.0);
  for_each_interior_node(g, [&](const std::array<int, 3>& idx, long flat) {
    b[flat] = laplacian_fd(out, idx);
  });

  // The Laplacian of the result has natural scale ring_max / h^2, so the
  // achievable residual is that scale times a modest roundoff multiple.
  const double h_min = g.min_spacing();
  const double target = 2e-13 * (1.0 + ring_max) / (h_min * h_min);
  std::vector<double> w(nn, 0.0), r = b, p = b, ap(nn, 0.0);
  double rs = dot_interior(g, r, r);
  std::vector<double> history;
  const long budget = 20L * g.nodes() + 200;
  bool done = max_abs_interior(g, r) < 0.5 * target;
  for (long it = 0; it < budget && !done; ++it) {
    neg_laplace_apply(g, p, ap);
    const double pap = dot_interior(g, p, ap);
    if (!(pap > 0.0)) break;
    const double alpha = rs / pap;
    for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
      w[flat] += alpha * p[flat];
      r[flat] -= alpha * ap[flat];
    });
    const double rs_new = dot_interior(g, r, r);
    history.push_back(std::sqrt(rs_new));
    if (max_abs_interior(g, r) < 0.5 * target) {
      done = true;
      break;
    }
    const double beta = rs_new / rs;
    rs = rs_new;
    for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
      p[flat] = r[flat] + beta * p[flat];
    });
  }

  for_each_interior_node(g, [&](const std::array<int, 3>&, long flat) {
    out.values[flat] += w[flat];
  });

  // Verify the residual contract on the assembled field.
  double worst = 0.0;
  for_each_interior_node(g, [&](const std::array<int, 3>& idx, long) {
    worst = std::max(worst, std::abs(laplacian_fd(out, idx)));
  });
  if (worst >= target) {
    throw NonConvergence("harmonic_solve: Laplacian residual " + std::to_string(worst) +
                             " did not reach " + std::to_string(target),
                         history);
  }
  return out;
}

GridField harmonic_solve(const Grid& g, const Sampler& phi) {
  GridField data(g, 0.0);
  for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    if (g.is_boundary(idx)) data.values[flat] = phi(g.coords(idx));
  });
  return harmonic_solve(g, data);
}

double max_second_difference(const GridField& u, const Region& region) {
  const Grid& g = u.grid;
  g.validate();
  if (region.margin < 1) throw InvalidIndex("max_second_difference: margin must be >= 1");
  if (2 * region.margin >= g.m - 1) {
    throw InvalidIndex("max_second_difference: region is empty at this margin");
  }
  double worst = 0.0;
  for_each_margin_node(g, region.margin, [&](const std::array<int, 3>& idx, long) {
    const spectral::SymMatrix h = hessian_fd(u, idx);
    const spectral::EigenDecomp d = spectral::eigen_sym(h);
    worst = std::max(worst, std::max(std::abs(d.lambda.min()), std::abs(d.lambda.max())));
  });
  return worst;
}

namespace {

nlohmann::json grid_to_json(const Grid& g) {
  nlohmann::json j;
  j["n"] = g.dim;
  j["extents"] = std::vector<double>(g.extents.begin(), g.extents.begin() + g.dim);
  j["m"] = g.m;
  return j;
}

Grid grid_from_json(const nlohmann::json& j) {
  Grid g;
  g.dim = j.at("n").get<int>();
  const auto ext = j.at("extents").get<std::vector<double>>();
  if (static_cast<int>(ext.size()) != g.dim) {
    throw InvalidInput("grid json: extents length does not match n");
  }
  for (int a = 0; a < g.dim; ++a) g.extents[a] = ext[a];
  g.m = j.at("m").get<int>();
  g.validate();
  return g;
}

}  // namespace

std::string to_json(const GridField& f) {
  nlohmann::json j;
  j["grid"] = grid_to_json(f.grid);
  j["values"] = f.values;
  return j.dump(2) + "\n";
}

GridField field_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("field json: parse failure: ") + e.what());
  }
  try {
    GridField f(grid_from_json(j.at("grid")));
    f.values = j.at("values").get<std::vector<double>>();
    if (static_cast<long>(f.values.size()) != f.grid.nodes()) {
      throw InvalidInput("field json: value count does not match the grid");
    }
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("field json: bad structure: ") + e.what());
  }
}

void write_json_file(const GridField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("write_json_file: cannot open " + path);
  out << to_json(f);
}

GridField read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("read_json_file: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return field_from_json(ss.str());
}

void write_csv_file(const GridField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("write_csv_file: cannot open " + path);
  const Grid& g = f.grid;
  out << (g.dim == 2 ? "x0,x1,value\n" : "x0,x1,x2,value\n");
  char buf[128];
  for_each_node(g, [&](const std::array<int, 3>& idx, long flat) {
    const Coord x = g.coords(idx);
    if (g.dim == 2) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], f.values[flat]);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", x[0], x[1], x[2],
                    f.values[flat]);
    }
    out << buf;
  });
}

}  // namespace hessolve::grid
