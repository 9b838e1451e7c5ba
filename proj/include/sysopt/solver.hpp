// Column generation driver with lower-bound tracking, and the price-and-branch
// integer stage over the generated column pool.
#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sysopt/graph.hpp"
#include "sysopt/master.hpp"
#include "sysopt/model.hpp"
#include "sysopt/pricing.hpp"

namespace sysopt {

enum class PricerKind { astar, dijkstra };
enum class CgStatus { optimal, iteration_limit, time_limit };

const char* to_string(PricerKind kind);
const char* to_string(CgStatus status);

struct CgConfig {
  bool use_filter = true;
  PricerKind pricer = PricerKind::astar;
  int max_iterations = 100000;
  double time_limit_seconds = 3600.0;
  double tol_dual = 1e-9;
  double tol_optimality = 1e-7;
  unsigned seed = 0;
  int threads = 1;
  int node_limit = 100000;
  /// Supplies the master's LP engine; the built-in simplex when empty.
  std::function<std::unique_ptr<lp::LpEngine>()> engine_factory;
};

struct IterationLog {
  int iteration = 0;
  double objective = 0.0;
  double lower_bound = 0.0;
  std::size_t pool_size = 0;  // passengers selected for pricing
  std::size_t priced = 0;
  std::size_t columns_added = 0;
  bool full_pass = false;
  std::size_t expanded = 0;
  double millis = 0.0;
};

/// Every pricing call of a run, for instrumentation and equivalence checks.
struct PricingRecord {
  int iteration = 0;
  PricingResult result;
};

struct CgReport {
  std::vector<IterationLog> iterations;
  CgStatus status = CgStatus::optimal;
  double objective = 0.0;
  double lower_bound = 0.0;
  std::size_t total_priced = 0;
  std::size_t total_expanded = 0;
  double millis = 0.0;
};

struct CgRun {
  MasterProblem master;
  CgReport report;
  std::vector<DualSnapshot> dual_history;  // one per master solve
  std::vector<PricingRecord> pricing_log;
};

/// Optional hook observing every pricing call (used by tests).
using PricingObserver = std::function<void(const DualSnapshot&, const PricingResult&)>;

/// Runs column generation to LP optimality or a limit. `oracle` is required for the A* pricer.
CgRun run_column_generation(const TimeExpandedGraph& g, const Instance& inst, const CgConfig& cfg,
                            const HeuristicOracle* oracle = nullptr,
                            const PricingObserver& observer = {});

struct IntegerResult {
  Solution solution;
  std::vector<std::size_t> chosen;  // one column id per passenger
  double bound = 0.0;               // final column-generation LP value
  double gap = 0.0;
  bool search_complete = true;  // false when the node or time limit cut the search
  std::size_t nodes = 0;
};

/// Solves the integer program restricted to the pooled columns (dummies included)
/// by depth-first branch-and-bound and reconstructs passenger paths.
IntegerResult price_and_branch(const MasterProblem& master, const TimeExpandedGraph& g,
                               const Instance& inst, const CgConfig& cfg);

void write_report_json(const CgReport& report, std::ostream& out);
void write_iterations_csv(const CgReport& report, std::ostream& out);

}  // namespace sysopt
