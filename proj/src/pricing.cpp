#include "sysopt/pricing.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>

namespace sysopt {

namespace {

std::uint64_t fnv_mix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<double> dijkstra_on_stops(std::size_t n,
                                      const std::vector<std::vector<std::pair<int, Time>>>& adj,
                                      int source) {
  std::vector<double> dist(n, kInfinity);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (auto [w, c] : adj[v]) {
      double nd = d + static_cast<double>(c);
      if (nd < dist[w]) {
        dist[w] = nd;
        heap.emplace(nd, w);
      }
    }
  }
  return dist;
}

}  // namespace

std::optional<Time> ContractedGraph::arc_cost(int from, int to) const {
  for (const StopArc& a : stop_arcs_)
    if (a.from == from && a.to == to) return a.cost;
  return std::nullopt;
}

void save_stop_distances(const std::string& path, std::uint64_t hash,
                         const std::vector<std::vector<double>>& sigma) {
  std::ofstream out(path);
  if (!out) return;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  out << "# sysopt-stop-distances v1 hash=" << hex << " stops=" << sigma.size() << '\n';
  for (const auto& row : sigma) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      if (row[j] == kInfinity)
        out << "inf";
      else
        out << row[j];
    }
    out << '\n';
  }
}

std::optional<std::vector<std::vector<double>>> load_stop_distances(const std::string& path,
                                                                    std::uint64_t hash,
                                                                    std::size_t stops) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string header;
  std::getline(in, header);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(hash));
  std::string expected = "# sysopt-stop-distances v1 hash=" + std::string(hex) +
                         " stops=" + std::to_string(stops);
  if (header != expected) return std::nullopt;
  std::vector<std::vector<double>> sigma;
  std::string line;
  while (sigma.size() < stops && std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell == "inf") {
        row.push_back(kInfinity);
      } else {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          return std::nullopt;
        }
      }
    }
    if (row.size() != stops) return std::nullopt;
    sigma.push_back(std::move(row));
  }
  if (sigma.size() != stops) return std::nullopt;
  return sigma;
}

ContractedGraph build_contracted_graph(const TimeExpandedGraph& g, const Instance& inst,
                                       const std::string& cache_path) {
  ContractedGraph h;
  h.stop_count_ = inst.stops.size();
  std::map<std::pair<int, int>, Time> bundle;
  std::vector<std::map<int, Time>> egress(g.passenger_count());
  for (const Arc& a : g.arcs()) {
    const Vertex& from = g.vertex(a.from);
    const Vertex& to = g.vertex(a.to);
    if (from.kind == VertexKind::origin) continue;
    if (to.kind == VertexKind::destination) {
      auto [it, fresh] = egress[to.passenger].emplace(from.stop, a.cost);
      if (!fresh) it->second = std::min(it->second, a.cost);
      continue;
    }
    if (from.stop == to.stop) continue;  // transit and waiting collapse to self-loops
    auto [it, fresh] = bundle.emplace(std::make_pair(from.stop, to.stop), a.cost);
    if (!fresh) it->second = std::min(it->second, a.cost);
  }

  std::uint64_t hash = fnv_mix(1469598103934665603ULL, h.stop_count_);
  for (auto [key, cost] : bundle) {
    h.stop_arcs_.push_back({key.first, key.second, cost});
    hash = fnv_mix(hash, static_cast<std::uint64_t>(key.first));
    hash = fnv_mix(hash, static_cast<std::uint64_t>(key.second));
    hash = fnv_mix(hash, static_cast<std::uint64_t>(cost));
  }
  h.hash_ = hash;
  h.egress_.resize(g.passenger_count());
  for (std::size_t p = 0; p < egress.size(); ++p)
    for (auto [stop, cost] : egress[p]) h.egress_[p].push_back({stop, cost});

  if (!cache_path.empty()) {
    if (auto cached = load_stop_distances(cache_path, hash, h.stop_count_)) {
      h.sigma_ = std::move(*cached);
      h.from_cache_ = true;
      return h;
    }
  }
  std::vector<std::vector<std::pair<int, Time>>> adj(h.stop_count_);
  for (const auto& a : h.stop_arcs_) adj[a.from].emplace_back(a.to, a.cost);
  h.sigma_.resize(h.stop_count_);
  for (std::size_t s = 0; s < h.stop_count_; ++s)
    h.sigma_[s] = dijkstra_on_stops(h.stop_count_, adj, static_cast<int>(s));
  if (!cache_path.empty()) save_stop_distances(cache_path, hash, h.sigma_);
  return h;
}

std::vector<double> stop_heuristic(const ContractedGraph& h, std::size_t passenger) {
  std::vector<double> out(h.stop_count(), kInfinity);
  const auto& sigma = h.stop_distances();
  for (std::size_t i = 0; i < h.stop_count(); ++i)
    for (const auto& e : h.egress_arcs(passenger))
      out[i] = std::min(out[i], sigma[i][e.stop] + static_cast<double>(e.cost));
  return out;
}

std::vector<double> compute_heuristic(const ContractedGraph& h, const TimeExpandedGraph& g,
                                      std::size_t passenger) {
  std::vector<double> per_stop = stop_heuristic(h, passenger);
  std::vector<double> out(g.vertex_count(), 0.0);
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const Vertex& x = g.vertex(v);
    switch (x.kind) {
      case VertexKind::route:
      case VertexKind::wait:
        out[v] = per_stop[x.stop];
        break;
      case VertexKind::destination:
        out[v] = static_cast<std::size_t>(x.passenger) == passenger ? 0.0 : kInfinity;
        break;
      case VertexKind::origin:
        out[v] = 0.0;
        break;
    }
  }
  return out;
}

HeuristicOracle::HeuristicOracle(const ContractedGraph& h, const TimeExpandedGraph& g)
    : graph_(&g) {
  per_stop_.reserve(g.passenger_count());
  for (std::size_t p = 0; p < g.passenger_count(); ++p) per_stop_.push_back(stop_heuristic(h, p));
}

HeuristicOracle HeuristicOracle::zero(const TimeExpandedGraph& g) { return HeuristicOracle(g); }

double HeuristicOracle::estimate(std::size_t passenger, VertexId v) const {
  if (per_stop_.empty()) return 0.0;
  const Vertex& x = graph_->vertex(v);
  switch (x.kind) {
    case VertexKind::route:
    case VertexKind::wait:
      return per_stop_[passenger][x.stop];
    case VertexKind::destination:
      return static_cast<std::size_t>(x.passenger) == passenger ? 0.0 : kInfinity;
    case VertexKind::origin:
      return 0.0;
  }
  return 0.0;
}

namespace {

struct Label {
  double f;
  double g;
  VertexId v;
};

/// Min-heap order: smaller f, then larger g, then smaller vertex id.
struct LabelAfter {
  bool operator()(const Label& a, const Label& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g < b.g;
    return a.v > b.v;
  }
};

template <typename Estimate>
PricingResult best_path(const TimeExpandedGraph& g, const DualSnapshot& duals,
                        std::size_t passenger, double alpha, double penalty,
                        Estimate&& estimate) {
  PricingResult result;
  result.passenger = passenger;
  const VertexId source = g.origin(passenger);
  const VertexId target = g.destination(passenger);
  const std::size_t n = g.vertex_count();
  std::vector<double> dist(n, kInfinity);
  std::vector<ArcId> pred(n, 0);
  std::vector<char> settled(n, 0);
  std::priority_queue<Label, std::vector<Label>, LabelAfter> heap;
  dist[source] = 0.0;
  heap.push({estimate(source), 0.0, source});
  bool reached = false;
  while (!heap.empty()) {
    Label top = heap.top();
    heap.pop();
    if (settled[top.v] || top.g > dist[top.v]) continue;
    settled[top.v] = 1;
    ++result.expanded;
    if (top.v == target) {
      reached = true;
      break;
    }
    for (ArcId a : g.out_arcs(top.v)) {
      VertexId w = g.arc(a).to;
      if (settled[w]) continue;
      double h = estimate(w);
      if (h == kInfinity) continue;
      double ng = top.g + reduced_arc_cost(g, duals, a);
      if (ng < dist[w]) {
        dist[w] = ng;
        pred[w] = a;
        heap.push({ng + h, ng, w});
      }
    }
  }
  if (!reached) {
    result.objective = penalty - alpha;
    return result;
  }
  std::vector<ArcId> arcs;
  for (VertexId v = target; v != source; v = g.arc(pred[v]).from) arcs.push_back(pred[v]);
  std::reverse(arcs.begin(), arcs.end());
  result.path = make_path(g, passenger, std::move(arcs));
  result.path_reduced_cost = dist[target];
  result.objective = dist[target] - alpha;
  return result;
}

}  // namespace

PricingResult price_dijkstra(const TimeExpandedGraph& g, const DualSnapshot& duals,
                             std::size_t passenger, double alpha, double penalty) {
  return best_path(g, duals, passenger, alpha, penalty, [](VertexId) { return 0.0; });
}

PricingResult price_astar(const TimeExpandedGraph& g, const DualSnapshot& duals,
                          std::size_t passenger, double alpha, double penalty,
                          const HeuristicOracle& oracle) {
  return best_path(g, duals, passenger, alpha, penalty,
                   [&](VertexId v) { return oracle.estimate(passenger, v); });
}

std::vector<std::size_t> pricing_filter(const MasterProblem& master, const DualSnapshot& duals,
                                        double tol) {
  std::vector<char> negative(duals.arc.size(), 0);
  bool any = false;
  for (ArcId a : master.capacity_arcs())
    if (duals.arc[a] < -tol) negative[a] = any = true;
  std::set<std::size_t> pool;
  if (!any) return {};
  for (const Column& c : master.columns()) {
    if (c.origin != ColumnOrigin::generated || pool.contains(c.passenger)) continue;
    for (ArcId a : c.path.arcs)
      if (negative[a]) {
        pool.insert(c.passenger);
        break;
      }
  }
  return {pool.begin(), pool.end()};
}

}  // namespace sysopt
