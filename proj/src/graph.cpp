#include "sysopt/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <queue>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sysopt {

const char* to_string(ArcKind kind) {
  switch (kind) {
    case ArcKind::route: return "route";
    case ArcKind::waiting: return "waiting";
    case ArcKind::transit: return "transit";
    case ArcKind::walking: return "walking";
    case ArcKind::access: return "access";
    case ArcKind::egress: return "egress";
  }
  return "?";
}

const char* to_string(VertexKind kind) {
  switch (kind) {
    case VertexKind::route: return "route";
    case VertexKind::wait: return "wait";
    case VertexKind::origin: return "origin";
    case VertexKind::destination: return "destination";
  }
  return "?";
}

std::span<const ArcId> TimeExpandedGraph::out_arcs(VertexId v) const {
  return std::span<const ArcId>(out_list_).subspan(out_offsets_[v],
                                                   out_offsets_[v + 1] - out_offsets_[v]);
}

std::span<const ArcId> TimeExpandedGraph::in_arcs(VertexId v) const {
  return std::span<const ArcId>(in_list_).subspan(in_offsets_[v],
                                                  in_offsets_[v + 1] - in_offsets_[v]);
}

std::optional<VertexId> TimeExpandedGraph::find_wait(int stop, Time time) const {
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    const Vertex& x = vertices_[v];
    if (x.kind == VertexKind::wait && x.stop == stop && x.time == time) return v;
  }
  return std::nullopt;
}

std::optional<VertexId> TimeExpandedGraph::find_route_node(int stop, Time time, int route) const {
  for (VertexId v = 0; v < vertices_.size(); ++v) {
    const Vertex& x = vertices_[v];
    if (x.kind == VertexKind::route && x.stop == stop && x.time == time && x.route == route)
      return v;
  }
  return std::nullopt;
}

std::optional<ArcId> TimeExpandedGraph::find_arc(VertexId from, VertexId to) const {
  for (ArcId a : out_arcs(from))
    if (arcs_[a].to == to) return a;
  return std::nullopt;
}

std::string TimeExpandedGraph::label(VertexId v, const Instance& inst) const {
  const Vertex& x = vertices_[v];
  switch (x.kind) {
    case VertexKind::route:
      return "R:" + inst.stops[x.stop].stop_id + "@" + std::to_string(x.time) + ":" +
             inst.routes[x.route].route_id;
    case VertexKind::wait:
      return "W:" + inst.stops[x.stop].stop_id + "@" + std::to_string(x.time);
    case VertexKind::origin:
      return "O:" + inst.requests[x.passenger].passenger_id;
    case VertexKind::destination:
      return "D:" + inst.requests[x.passenger].passenger_id;
  }
  return "?";
}

void TimeExpandedGraph::finalize() {
  const std::size_t n = vertices_.size();
  out_offsets_.assign(n + 1, 0);
  in_offsets_.assign(n + 1, 0);
  for (const Arc& a : arcs_) {
    ++out_offsets_[a.from + 1];
    ++in_offsets_[a.to + 1];
  }
  for (std::size_t v = 0; v < n; ++v) {
    out_offsets_[v + 1] += out_offsets_[v];
    in_offsets_[v + 1] += in_offsets_[v];
  }
  out_list_.resize(arcs_.size());
  in_list_.resize(arcs_.size());
  std::vector<std::size_t> out_fill(out_offsets_.begin(), out_offsets_.end() - 1);
  std::vector<std::size_t> in_fill(in_offsets_.begin(), in_offsets_.end() - 1);
  capacitated_.clear();
  for (ArcId a = 0; a < arcs_.size(); ++a) {
    out_list_[out_fill[arcs_[a].from]++] = a;
    in_list_[in_fill[arcs_[a].to]++] = a;
    if (arcs_[a].capacitated()) capacitated_.push_back(a);
  }
}

class GraphBuilder {
 public:
  GraphBuilder(const Instance& inst, const GraphOptions& options)
      : inst_(inst), options_(options) {}

  TimeExpandedGraph build() {
    add_route_layers();
    add_waiting_layers();
    add_transit_arcs();
    add_walking_arcs();
    add_passengers();
    g_.finalize();
    if (options_.prune) prune();
    return std::move(g_);
  }

 private:
  VertexId add_vertex(Vertex v) {
    g_.vertices_.push_back(v);
    return static_cast<VertexId>(g_.vertices_.size() - 1);
  }

  void add_arc(VertexId from, VertexId to, Time cost, int capacity, ArcKind kind) {
    g_.arcs_.push_back({from, to, cost, capacity, kind});
  }

  void add_route_layers() {
    for (std::size_t r = 0; r < inst_.routes.size(); ++r) {
      const RouteSchedule& route = inst_.routes[r];
      std::optional<VertexId> prev;
      for (const Visit& visit : route.visits) {
        int stop = static_cast<int>(*inst_.stop_index(visit.stop_id));
        VertexId v = add_vertex({VertexKind::route, stop, visit.arrival, static_cast<int>(r), -1});
        route_nodes_.push_back(v);
        arrivals_[stop].insert(visit.arrival);
        if (prev) {
          add_arc(*prev, v, visit.arrival - g_.vertices_[*prev].time, route.capacity,
                  ArcKind::route);
        }
        prev = v;
      }
    }
  }

  void add_waiting_layers() {
    for (auto& [stop, times] : arrivals_) {
      std::optional<VertexId> prev;
      for (Time t : times) {
        VertexId v = add_vertex({VertexKind::wait, stop, t, -1, -1});
        wait_index_[{stop, t}] = v;
        waits_by_stop_[stop].emplace_back(t, v);
        if (prev) add_arc(*prev, v, t - g_.vertices_[*prev].time, kUnboundedCapacity,
                          ArcKind::waiting);
        prev = v;
      }
    }
  }

  void add_transit_arcs() {
    for (VertexId rv : route_nodes_) {
      const Vertex& x = g_.vertices_[rv];
      VertexId wv = wait_index_.at({x.stop, x.time});
      add_arc(rv, wv, 0, kUnboundedCapacity, ArcKind::transit);
      add_arc(wv, rv, 0, kUnboundedCapacity, ArcKind::transit);
    }
  }

  void add_walking_arcs() {
    for (auto& [from_stop, from_waits] : waits_by_stop_) {
      for (auto& [to_stop, to_waits] : waits_by_stop_) {
        if (from_stop == to_stop) continue;
        double d = inst_.stop_distance(from_stop, to_stop);
        if (!(d <= inst_.params.max_walk)) continue;
        Time walk = inst_.walk_time(d);
        for (auto [t, v] : from_waits) {
          auto it = std::lower_bound(to_waits.begin(), to_waits.end(),
                                     std::make_pair(t + walk, VertexId{0}));
          for (; it != to_waits.end(); ++it) {
            add_arc(v, it->second, it->first - t, kUnboundedCapacity, ArcKind::walking);
            if (!options_.all_walk_targets) break;
          }
        }
      }
    }
  }

  void add_passengers() {
    const Parameters& prm = inst_.params;
    const std::size_t n = inst_.requests.size();
    for (std::size_t p = 0; p < n; ++p)
      g_.origins_.push_back(add_vertex({VertexKind::origin, -1, inst_.requests[p].depart, -1,
                                        static_cast<int>(p)}));
    for (std::size_t p = 0; p < n; ++p)
      g_.destinations_.push_back(add_vertex({VertexKind::destination, -1,
                                             inst_.requests[p].depart + prm.max_travel, -1,
                                             static_cast<int>(p)}));
    for (std::size_t p = 0; p < n; ++p) {
      const Time depart = inst_.requests[p].depart;
      for (auto& [stop, waits] : waits_by_stop_) {
        double da = inst_.access_distance(p, stop);
        if (da <= prm.max_access) {
          Time walk = inst_.walk_time(da);
          for (auto [t, v] : waits)
            if (depart + walk <= t && t <= depart + prm.max_wait)
              add_arc(g_.origins_[p], v, t - depart, kUnboundedCapacity, ArcKind::access);
        }
        double de = inst_.egress_distance(stop, p);
        if (de <= prm.max_egress) {
          Time walk = inst_.walk_time(de);
          for (auto [t, v] : waits)
            if (depart <= t + walk && t + walk <= depart + prm.max_travel)
              add_arc(v, g_.destinations_[p], walk, kUnboundedCapacity, ArcKind::egress);
        }
      }
    }
  }

  void prune() {
    const std::size_t n = g_.vertex_count();
    auto sweep = [&](std::span<const VertexId> seeds, bool forward) {
      std::vector<char> seen(n, 0);
      std::vector<VertexId> stack(seeds.begin(), seeds.end());
      for (VertexId s : seeds) seen[s] = 1;
      while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (ArcId a : forward ? g_.out_arcs(v) : g_.in_arcs(v)) {
          VertexId w = forward ? g_.arcs_[a].to : g_.arcs_[a].from;
          if (!seen[w]) {
            seen[w] = 1;
            stack.push_back(w);
          }
        }
      }
      return seen;
    };
    auto from_origin = sweep(g_.origins_, true);
    auto to_destination = sweep(g_.destinations_, false);

    TimeExpandedGraph pruned;
    std::vector<VertexId> remap(n, 0);
    std::vector<char> keep(n, 0);
    for (VertexId v = 0; v < n; ++v) {
      VertexKind k = g_.vertices_[v].kind;
      keep[v] = k == VertexKind::origin || k == VertexKind::destination ||
                (from_origin[v] && to_destination[v]);
      if (keep[v]) {
        remap[v] = static_cast<VertexId>(pruned.vertices_.size());
        pruned.vertices_.push_back(g_.vertices_[v]);
      }
    }
    for (const Arc& a : g_.arcs_)
      if (keep[a.from] && keep[a.to])
        pruned.arcs_.push_back({remap[a.from], remap[a.to], a.cost, a.capacity, a.kind});
    for (VertexId o : g_.origins_) pruned.origins_.push_back(remap[o]);
    for (VertexId d : g_.destinations_) pruned.destinations_.push_back(remap[d]);
    pruned.finalize();
    g_ = std::move(pruned);
  }

  const Instance& inst_;
  GraphOptions options_;
  TimeExpandedGraph g_;
  std::vector<VertexId> route_nodes_;
  std::map<int, std::set<Time>> arrivals_;
  std::map<std::pair<int, Time>, VertexId> wait_index_;
  std::map<int, std::vector<std::pair<Time, VertexId>>> waits_by_stop_;
};

TimeExpandedGraph build_graph(const Instance& inst, const GraphOptions& options) {
  return GraphBuilder(inst, options).build();
}

GraphPath make_path(const TimeExpandedGraph& g, std::size_t passenger, std::vector<ArcId> arcs) {
  GraphPath path;
  path.passenger = passenger;
  path.vertices.push_back(g.origin(passenger));
  for (ArcId a : arcs) {
    const Arc& arc = g.arc(a);
    if (arc.from != path.vertices.back())
      throw std::invalid_argument("arc sequence is not a connected path");
    path.vertices.push_back(arc.to);
    path.cost += arc.cost;
  }
  path.arcs = std::move(arcs);
  return path;
}

PathEnumeration enumerate_od_paths(const TimeExpandedGraph& g, std::size_t passenger,
                                   std::size_t limit) {
  PathEnumeration result;
  const VertexId source = g.origin(passenger);
  const VertexId target = g.destination(passenger);

  // Only descend into vertices that can still reach the target.
  std::vector<char> useful(g.vertex_count(), 0);
  std::vector<VertexId> stack{target};
  useful[target] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (ArcId a : g.in_arcs(v)) {
      VertexId u = g.arc(a).from;
      if (!useful[u]) {
        useful[u] = 1;
        stack.push_back(u);
      }
    }
  }
  if (!useful[source]) return result;

  std::vector<char> on_path(g.vertex_count(), 0);
  std::vector<ArcId> arcs;
  std::function<bool(VertexId)> dfs = [&](VertexId v) -> bool {
    if (v == target) {
      if (result.paths.size() >= limit) {
        result.truncated = true;
        return false;
      }
      result.paths.push_back(make_path(g, passenger, arcs));
      return true;
    }
    on_path[v] = 1;
    for (ArcId a : g.out_arcs(v)) {
      VertexId w = g.arc(a).to;
      if (on_path[w] || !useful[w]) continue;
      arcs.push_back(a);
      bool go_on = dfs(w);
      arcs.pop_back();
      if (!go_on) {
        on_path[v] = 0;
        return false;
      }
    }
    on_path[v] = 0;
    return true;
  };
  dfs(source);
  return result;
}

SolutionPath reconstruct_solution_path(const TimeExpandedGraph& g, const GraphPath& path,
                                       const Instance& inst) {
  const Request& req = inst.requests[path.passenger];
  SolutionPath out;
  out.passenger_id = req.passenger_id;
  out.served = true;
  out.legs.push_back({PlaceKey::Kind::origin, "", req.depart, ""});
  for (std::size_t i = 1; i < path.vertices.size(); ++i) {
    const Vertex& v = g.vertex(path.vertices[i]);
    const Arc& in = g.arc(path.arcs[i - 1]);
    if (v.kind == VertexKind::destination) {
      out.legs.push_back({PlaceKey::Kind::destination, "", out.legs.back().time + in.cost, ""});
      break;
    }
    const std::string& stop_id = inst.stops[v.stop].stop_id;
    const Leg& last = out.legs.back();
    if (last.kind == PlaceKey::Kind::stop && last.stop_id == stop_id && last.time == v.time)
      continue;  // boarding or alighting at the same place and time
    std::string route_id = in.kind == ArcKind::route ? inst.routes[v.route].route_id : "";
    out.legs.push_back({PlaceKey::Kind::stop, stop_id, v.time, std::move(route_id)});
  }
  out.cost = static_cast<double>(out.legs.back().time - req.depart);
  return out;
}

void write_arcs_csv(const TimeExpandedGraph& g, const Instance& inst, std::ostream& out) {
  out << "kind,from,to,cost,capacity\n";
  for (const Arc& a : g.arcs()) {
    out << to_string(a.kind) << ',' << g.label(a.from, inst) << ',' << g.label(a.to, inst) << ','
        << a.cost << ',';
    if (a.capacitated())
      out << a.capacity;
    else
      out << "inf";
    out << '\n';
  }
}

}  // namespace sysopt
