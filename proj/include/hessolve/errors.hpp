#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hessolve {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A parameter combination that is structurally invalid (bad k/l/n, negative
/// gamma, malformed schedule, unparsable expression, ...).
struct InvalidSpec : Error {
  using Error::Error;
};

/// An eigenvalue tuple fell outside the admissible cone where a strict
/// interior point was required.
struct NotInCone : Error {
  using Error::Error;
};

/// A value-level argument that does not satisfy an operation's contract
/// (mismatched grids, non-symmetric input, non-finite entries, ...).
struct InvalidInput : Error {
  using Error::Error;
};

/// A node or axis index outside the valid range for the grid at hand.
struct InvalidIndex : Error {
  using Error::Error;
};

/// An iterative method ran out of its iteration budget or broke down.
/// Carries the residual history for post-mortem inspection.
struct NonConvergence : Error {
  std::vector<double> residual_history;

  explicit NonConvergence(const std::string& what,
                          std::vector<double> history = {})
      : Error(what), residual_history(std::move(history)) {}
};

/// No admissible lower field could be constructed for the problem.
/// Carries the worst offending node and its eigenvalue tuple when known.
struct SubsolutionFailed : Error {
  long worst_node = -1;
  std::vector<double> worst_lambda;

  explicit SubsolutionFailed(const std::string& what, long node = -1,
                             std::vector<double> lambda = {})
      : Error(what), worst_node(node), worst_lambda(std::move(lambda)) {}
};

}  // namespace hessolve
