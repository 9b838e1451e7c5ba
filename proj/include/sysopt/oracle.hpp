// Reference solvers for verification: the arc-flow multi-commodity LP
// relaxation and an exhaustive search over path assignments. Both build their
// models from the graph directly and share only the LP core with the master.
#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "sysopt/graph.hpp"
#include "sysopt/model.hpp"

namespace sysopt {

/// Raised when an instance is too large for an exhaustive or dense oracle.
class OracleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ArcFlow {
  ArcId arc = 0;
  double value = 0.0;
};

struct ArcFlowResult {
  double objective = 0.0;
  std::vector<std::vector<ArcFlow>> flows;  // per passenger, arcs with positive flow
  std::vector<double> unserved;             // per passenger, flow on the penalty bypass
  std::size_t variables = 0;
  std::size_t rows = 0;
};

/// LP relaxation of the arc formulation: one flow per passenger, joint arc
/// capacities, and a penalty-cost bypass per passenger for non-service.
ArcFlowResult solve_arcflow_lp(const TimeExpandedGraph& g, const Instance& inst,
                               std::size_t size_cap = 2'000'000);

struct BruteForceResult {
  double cost = 0.0;
  std::vector<std::optional<GraphPath>> assignment;  // nullopt = unserved
  std::vector<std::size_t> path_counts;
};

/// Exact integer optimum over all capacity-feasible path assignments.
BruteForceResult solve_bruteforce_ip(const TimeExpandedGraph& g, const Instance& inst,
                                     std::size_t path_limit = 10000,
                                     double combination_cap = 1e7);

}  // namespace sysopt
