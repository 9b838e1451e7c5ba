// Pricing: per-passenger reduced-cost shortest paths (Dijkstra and A*), the
// contracted stop graph that yields an admissible A* estimate, and the
// dual-driven pricing filter.
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sysopt/graph.hpp"
#include "sysopt/master.hpp"

namespace sysopt {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// c'_a = c_a - w*_a. Non-negative whenever the duals are.
inline double reduced_arc_cost(const TimeExpandedGraph& g, const DualSnapshot& duals, ArcId a) {
  double w = a < duals.arc.size() ? duals.arc[a] : 0.0;
  return static_cast<double>(g.arc(a).cost) - w;
}

/// Static digraph over stops plus one destination vertex per passenger. Arc
/// costs are the minimum over all time-expanded arcs between the two places.
class ContractedGraph {
 public:
  struct StopArc {
    int from = 0;
    int to = 0;
    Time cost = 0;
  };
  struct EgressArc {
    int stop = 0;
    Time cost = 0;
  };

  std::size_t stop_count() const { return stop_count_; }
  std::size_t passenger_count() const { return egress_.size(); }
  const std::vector<StopArc>& stop_arcs() const { return stop_arcs_; }
  /// Ingoing neighbourhood of a passenger's destination with arc costs.
  const std::vector<EgressArc>& egress_arcs(std::size_t passenger) const {
    return egress_[passenger];
  }
  std::optional<Time> arc_cost(int from, int to) const;

  /// All-pairs shortest distances between stops, ignoring destination vertices.
  const std::vector<std::vector<double>>& stop_distances() const { return sigma_; }
  bool loaded_from_cache() const { return from_cache_; }

  /// Content hash of the stop-level part; keys the on-disk distance cache.
  std::uint64_t network_hash() const { return hash_; }

  friend ContractedGraph build_contracted_graph(const TimeExpandedGraph&, const Instance&,
                                                const std::string&);

 private:
  std::size_t stop_count_ = 0;
  std::vector<StopArc> stop_arcs_;
  std::vector<std::vector<EgressArc>> egress_;
  std::vector<std::vector<double>> sigma_;
  std::uint64_t hash_ = 0;
  bool from_cache_ = false;
};

/// Builds the contracted graph and its stop distance table. When `cache_path`
/// is non-empty, a table with a matching network hash is loaded from it, and a
/// freshly computed table is written to it.
ContractedGraph build_contracted_graph(const TimeExpandedGraph& g, const Instance& inst,
                                       const std::string& cache_path = {});

/// Cache file: `# sysopt-stop-distances v1 hash=<16 hex> stops=<n>` then n
/// comma-separated rows, `inf` for unreachable pairs.
void save_stop_distances(const std::string& path, std::uint64_t hash,
                         const std::vector<std::vector<double>>& sigma);
std::optional<std::vector<std::vector<double>>> load_stop_distances(const std::string& path,
                                                                    std::uint64_t hash,
                                                                    std::size_t stops);

/// h_p per stop: shortest distance from each stop to the destination of `passenger`.
std::vector<double> stop_heuristic(const ContractedGraph& h, std::size_t passenger);

/// h'_p per vertex of g: lifted stop estimates, 0 at the own destination and
/// +inf at other destinations. Origins carry 0 (never used as targets).
std::vector<double> compute_heuristic(const ContractedGraph& h, const TimeExpandedGraph& g,
                                      std::size_t passenger);

/// Per-passenger admissible distance estimates, built once per instance.
class HeuristicOracle {
 public:
  HeuristicOracle(const ContractedGraph& h, const TimeExpandedGraph& g);
  /// The all-zero estimate.
  static HeuristicOracle zero(const TimeExpandedGraph& g);

  double estimate(std::size_t passenger, VertexId v) const;

 private:
  explicit HeuristicOracle(const TimeExpandedGraph& g) : graph_(&g) {}

  const TimeExpandedGraph* graph_;
  std::vector<std::vector<double>> per_stop_;  // empty for the zero oracle
};

struct PricingResult {
  std::size_t passenger = 0;
  double objective = 0.0;  // path reduced cost − α*_p, or ρ − α*_p when unreachable
  std::optional<GraphPath> path;
  double path_reduced_cost = kInfinity;
  std::size_t expanded = 0;
};

PricingResult price_dijkstra(const TimeExpandedGraph& g, const DualSnapshot& duals,
                             std::size_t passenger, double alpha, double penalty);

PricingResult price_astar(const TimeExpandedGraph& g, const DualSnapshot& duals,
                          std::size_t passenger, double alpha, double penalty,
                          const HeuristicOracle& oracle);

/// Passengers owning a pooled column that uses an arc with w* < -tol.
std::vector<std::size_t> pricing_filter(const MasterProblem& master, const DualSnapshot& duals,
                                        double tol = 1e-9);

}  // namespace sysopt
