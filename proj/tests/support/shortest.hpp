// Plain Bellman-Ford over a graph with per-arc costs; the reference for distance checks.
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "sysopt/graph.hpp"

namespace testing_support {

inline std::vector<double> bellman_ford(const sysopt::TimeExpandedGraph& g, sysopt::VertexId source,
                                        const std::function<double(sysopt::ArcId)>& cost) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.vertex_count(), inf);
  dist[source] = 0.0;
  for (std::size_t round = 0; round < g.vertex_count(); ++round) {
    bool changed = false;
    for (sysopt::ArcId a = 0; a < g.arc_count(); ++a) {
      const auto& arc = g.arc(a);
      if (dist[arc.from] == inf) continue;
      double d = dist[arc.from] + cost(a);
      if (d < dist[arc.to] - 1e-12) {
        dist[arc.to] = d;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

/// Distance from every vertex to `target`.
inline std::vector<double> distances_to(const sysopt::TimeExpandedGraph& g, sysopt::VertexId target,
                                        const std::function<double(sysopt::ArcId)>& cost) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(g.vertex_count(), inf);
  dist[target] = 0.0;
  for (std::size_t round = 0; round < g.vertex_count(); ++round) {
    bool changed = false;
    for (sysopt::ArcId a = 0; a < g.arc_count(); ++a) {
      const auto& arc = g.arc(a);
      if (dist[arc.to] == inf) continue;
      double d = dist[arc.to] + cost(a);
      if (d < dist[arc.from] - 1e-12) {
        dist[arc.from] = d;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return dist;
}

inline double static_distance(const sysopt::TimeExpandedGraph& g, std::size_t passenger) {
  auto d = bellman_ford(g, g.origin(passenger),
                        [&](sysopt::ArcId a) { return static_cast<double>(g.arc(a).cost); });
  return d[g.destination(passenger)];
}

}  // namespace testing_support
