#include "hessolve/config.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hessolve/expr.hpp"

namespace hessolve::config {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

[[noreturn]] void bad(const std::string& msg) { throw InvalidSpec(msg); }

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional) {
  if (!obj.is_object()) bad(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    if (!required.count(item.key()) && !optional.count(item.key())) {
      bad(where + ": unknown key \"" + item.key() + "\"");
    }
  }
  for (const auto& key : required) {
    if (!obj.contains(key)) bad(where + ": missing key \"" + key + "\"");
  }
}

double get_number(const json& obj, const std::string& where, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number()) bad(where + "." + key + " must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) bad(where + "." + key + " must be finite");
  return d;
}

int get_int(const json& obj, const std::string& where, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) bad(where + "." + key + " must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& where,
                       const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_string()) bad(where + "." + key + " must be a string");
  return v.get<std::string>();
}

grid::Coord get_point(const json& obj, const std::string& where,
                      const std::string& key, int dim) {
  const json& v = obj.at(key);
  if (!v.is_array() || static_cast<int>(v.size()) != dim) {
    bad(where + "." + key + " must be an array of " + std::to_string(dim) +
        " numbers");
  }
  grid::Coord c{};
  for (int a = 0; a < dim; ++a) {
    if (!v[a].is_number()) bad(where + "." + key + " entries must be numbers");
    c[a] = v[a].get<double>();
  }
  return c;
}

symfunc::SymmetricFunctionSpec parse_fspec(const json& obj, int n) {
  require_keys(obj, "f", {"kind"}, {"k", "l"});
  const std::string kind = get_string(obj, "f", "kind");
  if (kind == "sigma_root") {
    require_keys(obj, "f", {"kind", "k"}, {});
    return symfunc::SymmetricFunctionSpec::sigma_root(get_int(obj, "f", "k"), n);
  }
  if (kind == "quotient") {
    require_keys(obj, "f", {"kind", "k", "l"}, {});
    return symfunc::SymmetricFunctionSpec::quotient(get_int(obj, "f", "k"),
                                                    get_int(obj, "f", "l"), n);
  }
  bad("f.kind must be \"sigma_root\" or \"quotient\"");
}

grid::Grid parse_grid(const json& obj, int n) {
  require_keys(obj, "grid", {"extents", "m"}, {});
  grid::Grid g;
  g.dim = n;
  g.extents = get_point(obj, "grid", "extents", n);
  g.m = get_int(obj, "grid", "m");
  g.validate();
  return g;
}

grid::Sampler make_expression(const std::string& text) {
  auto e = std::make_shared<expr::Expression>(expr::Expression::parse(text));
  return [e](const grid::Coord& x) { return e->eval(x[0], x[1], x[2]); };
}

grid::Sampler parse_field(const json& obj, const std::string& where, int dim,
                          std::string& kind_out) {
  require_keys(obj, where, {"kind"},
               {"value", "expr", "center", "radius", "amplitude", "power", "scale",
                "gradient", "offset"});
  const std::string kind = get_string(obj, where, "kind");
  kind_out = kind;

  if (kind == "constant") {
    require_keys(obj, where, {"kind", "value"}, {});
    const double v = get_number(obj, where, "value");
    return [v](const grid::Coord&) { return v; };
  }
  if (kind == "expression") {
    require_keys(obj, where, {"kind", "expr"}, {});
    return make_expression(get_string(obj, where, "expr"));
  }
  if (kind == "affine") {
    require_keys(obj, where, {"kind", "gradient", "offset"}, {});
    const grid::Coord gvec = get_point(obj, where, "gradient", dim);
    const double off = get_number(obj, where, "offset");
    return [gvec, off, dim](const grid::Coord& x) {
      double s = off;
      for (int a = 0; a < dim; ++a) s += gvec[a] * x[a];
      return s;
    };
  }
  if (kind == "bump_vanishing") {
    // amplitude * max(0, |x - c|^2 - r^2)^2: identically zero on the ball of
    // radius r around c, C^1 across its rim, positive outside.
    require_keys(obj, where, {"kind", "center", "radius", "amplitude"}, {});
    const grid::Coord c = get_point(obj, where, "center", dim);
    const double r = get_number(obj, where, "radius");
    const double amp = get_number(obj, where, "amplitude");
    if (!(r > 0.0)) bad(where + ".radius must be positive");
    if (amp < 0.0) bad(where + ".amplitude must be nonnegative");
    return [c, r, amp, dim](const grid::Coord& x) {
      double d2 = 0.0;
      for (int a = 0; a < dim; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
      const double t = std::max(0.0, d2 - r * r);
      return amp * t * t;
    };
  }
  if (kind == "radial_power") {
    require_keys(obj, where, {"kind", "center", "power", "scale"}, {});
    const grid::Coord c = get_point(obj, where, "center", dim);
    const double p = get_number(obj, where, "power");
    const double s = get_number(obj, where, "scale");
    if (!(p > 0.0)) bad(where + ".power must be positive");
    return [c, p, s, dim](const grid::Coord& x) {
      double d2 = 0.0;
      for (int a = 0; a < dim; ++a) d2 += (x[a] - c[a]) * (x[a] - c[a]);
      return s * std::pow(d2, 0.5 * p);
    };
  }
  bad(where + ".kind \"" + kind + "\" is not supported");
}

}  // namespace

Config parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  require_keys(doc, "config", {"name", "f", "n", "gamma", "grid", "psi", "phi"},
               {"schedule", "newton", "allow_gamma_zero"});

  Config c;
  c.name = get_string(doc, "config", "name");
  if (c.name.empty()) bad("name must be nonempty");

  const int n = get_int(doc, "config", "n");
  c.spec.fspec = parse_fspec(doc.at("f"), n);
  c.spec.gamma = get_number(doc, "config", "gamma");
  c.spec.grid = parse_grid(doc.at("grid"), n);
  c.spec.psi = parse_field(doc.at("psi"), "psi", n, c.psi_kind);
  c.spec.phi = parse_field(doc.at("phi"), "phi", n, c.phi_kind);

  if (doc.contains("schedule")) {
    const json& s = doc.at("schedule");
    require_keys(s, "schedule", {}, {"first_fraction", "ratio", "steps"});
    if (s.contains("first_fraction")) {
      c.spec.schedule.first_fraction = get_number(s, "schedule", "first_fraction");
    }
    if (s.contains("ratio")) c.spec.schedule.ratio = get_number(s, "schedule", "ratio");
    if (s.contains("steps")) c.spec.schedule.steps = get_int(s, "schedule", "steps");
  }
  if (doc.contains("newton")) {
    const json& s = doc.at("newton");
    require_keys(s, "newton", {}, {"tol", "max_iter"});
    if (s.contains("tol")) c.spec.newton.tol = get_number(s, "newton", "tol");
    if (s.contains("max_iter")) c.spec.newton.max_iter = get_int(s, "newton", "max_iter");
  }
  if (doc.contains("allow_gamma_zero")) {
    const json& v = doc.at("allow_gamma_zero");
    if (!v.is_boolean()) bad("allow_gamma_zero must be a boolean");
    c.spec.allow_gamma_zero = v.get<bool>();
  }

  c.spec.validate();
  c.canonical_json = doc.dump();  // nlohmann objects iterate sorted by key
  c.hash = fnv1a64(c.canonical_json);
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("config: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace hessolve::config
