// Partially time-expanded multilayered digraph: one route layer per vehicle
// trip, one waiting layer per stop, plus per-passenger origin/destination
// vertices joined by access and egress arcs.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sysopt/model.hpp"

namespace sysopt {

using VertexId = std::uint32_t;
using ArcId = std::uint32_t;

inline constexpr int kUnboundedCapacity = -1;

enum class VertexKind { route, wait, origin, destination };
enum class ArcKind { route, waiting, transit, walking, access, egress };

const char* to_string(ArcKind kind);
const char* to_string(VertexKind kind);

/// `stop`, `route` and `passenger` are indices into the owning Instance, -1 when not applicable.
struct Vertex {
  VertexKind kind = VertexKind::wait;
  int stop = -1;
  Time time = 0;
  int route = -1;
  int passenger = -1;
};

struct Arc {
  VertexId from = 0;
  VertexId to = 0;
  Time cost = 0;
  int capacity = kUnboundedCapacity;
  ArcKind kind = ArcKind::route;

  bool capacitated() const { return capacity != kUnboundedCapacity; }
};

struct GraphOptions {
  /// Connect a walking arc to every reachable waiting node instead of only the earliest one.
  bool all_walk_targets = false;
  /// Drop vertices that lie on no origin -> destination path.
  bool prune = false;
};

class TimeExpandedGraph {
 public:
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arc_count() const { return arcs_.size(); }
  std::size_t passenger_count() const { return origins_.size(); }

  const Vertex& vertex(VertexId v) const { return vertices_[v]; }
  const Arc& arc(ArcId a) const { return arcs_[a]; }
  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Arc> arcs() const { return arcs_; }
  std::span<const ArcId> out_arcs(VertexId v) const;
  std::span<const ArcId> in_arcs(VertexId v) const;

  VertexId origin(std::size_t passenger) const { return origins_[passenger]; }
  VertexId destination(std::size_t passenger) const { return destinations_[passenger]; }

  /// Arcs with finite capacity (the route arcs), in arc-id order.
  std::span<const ArcId> capacitated_arcs() const { return capacitated_; }

  std::optional<VertexId> find_wait(int stop, Time time) const;
  std::optional<VertexId> find_route_node(int stop, Time time, int route) const;
  std::optional<ArcId> find_arc(VertexId from, VertexId to) const;

  /// Human-readable vertex label, e.g. `W:s1@5`, `R:s1@5:r1`, `O:p1`, `D:p1`.
  std::string label(VertexId v, const Instance& inst) const;

  friend class GraphBuilder;

 private:
  void finalize();

  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::vector<std::size_t> out_offsets_, in_offsets_;
  std::vector<ArcId> out_list_, in_list_;
  std::vector<VertexId> origins_, destinations_;
  std::vector<ArcId> capacitated_;
};

/// Builds the digraph for a validated instance.
TimeExpandedGraph build_graph(const Instance& inst, const GraphOptions& options = {});

struct GraphPath {
  std::size_t passenger = 0;
  std::vector<VertexId> vertices;
  std::vector<ArcId> arcs;  // arcs[i] joins vertices[i] -> vertices[i+1]
  Time cost = 0;

  friend bool operator==(const GraphPath&, const GraphPath&) = default;
};

/// Builds a GraphPath from its arc sequence, recomputing vertices and cost.
GraphPath make_path(const TimeExpandedGraph& g, std::size_t passenger, std::vector<ArcId> arcs);

struct PathEnumeration {
  std::vector<GraphPath> paths;
  bool truncated = false;
};

/// All simple Origin(p) -> Destination(p) paths, stopping after `limit` paths.
PathEnumeration enumerate_od_paths(const TimeExpandedGraph& g, std::size_t passenger,
                                   std::size_t limit);

/// Passenger-facing (place, time) sequence for a graph path.
SolutionPath reconstruct_solution_path(const TimeExpandedGraph& g, const GraphPath& path,
                                       const Instance& inst);

/// CSV dump with columns kind,from,to,cost,capacity. Unbounded capacity prints as `inf`.
void write_arcs_csv(const TimeExpandedGraph& g, const Instance& inst, std::ostream& out);

}  // namespace sysopt
