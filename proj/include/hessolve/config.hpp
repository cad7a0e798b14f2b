#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hessolve/problem.hpp"

namespace hessolve::config {

/// A fully materialized problem plus the provenance a report needs: the
/// config's name, the data-field kinds, the canonical serialized form of the
/// document and a stable content hash.
struct Config {
  std::string name;
  problem::ProblemSpec spec;
  std::string psi_kind;
  std::string phi_kind;
  std::string canonical_json;  ///< sorted-key dump of the parsed document
  std::uint64_t hash = 0;      ///< fnv1a64(canonical_json)
};

/// FNV-1a 64-bit hash of a byte string.
std::uint64_t fnv1a64(std::string_view bytes);

/// Parses one JSON config document.  The schema is strict: unknown keys,
/// missing required keys or out-of-range values all throw InvalidSpec.
Config parse_config(const std::string& text);

/// Reads and parses a config file; unreadable path -> InvalidInput.
Config load_config(const std::string& path);

}  // namespace hessolve::config
