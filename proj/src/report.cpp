#include "hessolve/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hessolve/errors.hpp"

namespace hessolve::report {

namespace {

constexpr const char* kSchema = "hessolve-report-v1";

/// CSV field guard: the only free-form strings we emit are status messages;
/// commas, quotes and newlines would break row structure.
std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == ',' || c == '"' || c == '\n' || c == '\r') c = ';';
  }
  return out;
}

nlohmann::json stats_json(const verify::FieldStats& s) {
  return {{"c1_norm", s.c1_norm},
          {"c2_interior", s.c2_interior},
          {"c2_global", s.c2_global},
          {"c2_boundary", s.c2_boundary}};
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hash_hex(std::uint64_t h) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json stages = nlohmann::json::array();
  for (const StageSummary& s : m.stages) {
    stages.push_back({{"eps", s.eps},
                      {"status", s.status},
                      {"iterations", s.iterations},
                      {"final_residual", s.final_residual}});
  }
  const nlohmann::json doc = {{"schema", kSchema},
                              {"kind", "run-manifest"},
                              {"config_name", m.config_name},
                              {"config_hash", hash_hex(m.config_hash)},
                              {"eps0", m.eps0},
                              {"a_curvature", m.a_curvature},
                              {"schedule", m.schedule},
                              {"stages", stages},
                              {"converged", m.converged},
                              {"checks_pass", m.checks_pass},
                              {"outputs", m.outputs}};
  return doc.dump(2) + "\n";
}

std::string diagnostics_json(const verify::DiagnosticsReport& d,
                             const std::string& config_name,
                             std::uint64_t config_hash) {
  const nlohmann::json doc = {
      {"schema", kSchema},
      {"kind", "diagnostics"},
      {"config_name", config_name},
      {"config_hash", hash_hex(config_hash)},
      {"comparison",
       {{"pass", d.comparison.pass},
        {"min_above_lower", d.comparison.min_above_lower},
        {"min_below_upper", d.comparison.min_below_upper},
        {"worst_lower_node", d.comparison.worst_lower_node},
        {"worst_upper_node", d.comparison.worst_upper_node},
        {"slack", d.comparison.slack}}},
      {"admissibility",
       {{"pass", d.admissibility.pass},
        {"violations", d.admissibility.violations},
        {"worst_sigma", d.admissibility.worst_sigma},
        {"laplacian_min", d.admissibility.laplacian_min},
        {"tol", d.admissibility.tol}}},
      {"ellipticity",
       {{"pass", d.ellipticity.pass},
        {"lambda_min", d.ellipticity.lambda_min},
        {"lambda_max", d.ellipticity.lambda_max},
        {"min_trace_f", d.ellipticity.min_trace_f}}},
      {"gradient_gap",
       {{"pass", d.gradient_gap.pass},
        {"total", d.gradient_gap.total},
        {"skipped", d.gradient_gap.skipped},
        {"active", d.gradient_gap.active},
        {"min_theta", d.gradient_gap.min_theta},
        {"activation_fraction", d.gradient_gap.activation_fraction}}},
      {"stats", stats_json(d.stats)},
      {"all_pass", d.all_pass}};
  return doc.dump(2) + "\n";
}

std::string trace_csv(const std::vector<solver::IterationLog>& trace) {
  std::string out =
      "eps,iter,residual_norm,step_scale,linear_iters,min_sigma,cone_violations\n";
  for (const solver::IterationLog& l : trace) {
    out += format_double(l.eps) + "," + std::to_string(l.iter) + "," +
           format_double(l.residual_norm) + "," + format_double(l.step_scale) +
           "," + std::to_string(l.linear_iters) + "," +
           format_double(l.min_sigma) + "," + std::to_string(l.cone_violations) +
           "\n";
  }
  return out;
}

std::string sweep_csv(const verify::SweepTable& t) {
  std::string out =
      "gamma,eps,c1_norm,c2_interior,c2_global,c2_boundary,iterations,status,"
      "solved\n";
  for (const verify::SweepCell& c : t.cells) {
    out += format_double(c.gamma) + "," + format_double(c.eps) + "," +
           format_double(c.stats.c1_norm) + "," +
           format_double(c.stats.c2_interior) + "," +
           format_double(c.stats.c2_global) + "," +
           format_double(c.stats.c2_boundary) + "," +
           std::to_string(c.iterations) + "," + sanitize(c.status) + "," +
           (c.solved ? "1" : "0") + "\n";
  }
  return out;
}

std::string sweep_summary_json(const verify::SweepTable& t,
                               const std::string& config_name,
                               std::uint64_t config_hash) {
  nlohmann::json rows = nlohmann::json::array();
  for (const verify::GammaSummary& g : t.summary) {
    rows.push_back({{"gamma", g.gamma},
                    {"eps0", g.eps0},
                    {"converged", g.converged},
                    {"c2_stability_ratio", g.c2_stability_ratio},
                    {"c1_stability_ratio", g.c1_stability_ratio},
                    {"boundary_ratio", g.boundary_ratio}});
  }
  long solved = 0;
  for (const verify::SweepCell& c : t.cells) {
    if (c.solved) ++solved;
  }
  const nlohmann::json doc = {{"schema", kSchema},
                              {"kind", "sweep-summary"},
                              {"config_name", config_name},
                              {"config_hash", hash_hex(config_hash)},
                              {"cells", static_cast<long>(t.cells.size())},
                              {"solved_cells", solved},
                              {"runs", rows}};
  return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot open for writing: " + path);
  out << content;
  if (!out) throw InvalidInput("write failed: " + path);
}

}  // namespace hessolve::report
