#include "sysopt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include "sysopt/simplex.hpp"

namespace sysopt {

namespace {

std::vector<char> reach(const TimeExpandedGraph& g, VertexId seed, bool forward) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> stack{seed};
  seen[seed] = 1;
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    for (ArcId a : forward ? g.out_arcs(v) : g.in_arcs(v)) {
      VertexId w = forward ? g.arc(a).to : g.arc(a).from;
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
    }
  }
  return seen;
}

}  // namespace

ArcFlowResult solve_arcflow_lp(const TimeExpandedGraph& g, const Instance& inst,
                               std::size_t size_cap) {
  const std::size_t passengers = g.passenger_count();
  if (g.arc_count() * passengers > size_cap)
    throw OracleRefused("arc formulation too large: " + std::to_string(g.arc_count()) +
                        " arcs x " + std::to_string(passengers) + " passengers exceeds " +
                        std::to_string(size_cap));

  lp::LinearProgram lp;
  std::vector<int> capacity_row(g.arc_count(), -1);
  for (ArcId a : g.capacitated_arcs())
    capacity_row[a] = lp.add_row(lp::RowSense::le, g.arc(a).capacity);

  struct VarInfo {
    std::size_t passenger;
    std::optional<ArcId> arc;  // nullopt for the bypass
  };
  std::vector<VarInfo> vars;

  for (std::size_t p = 0; p < passengers; ++p) {
    const VertexId source = g.origin(p);
    const VertexId sink = g.destination(p);
    // Flow of p can only use arcs on some source -> sink path; restricting the
    // commodity to those leaves the optimum unchanged.
    auto fwd = reach(g, source, true);
    auto bwd = reach(g, sink, false);
    std::vector<int> row(g.vertex_count(), -1);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      if ((fwd[v] && bwd[v]) || v == source || v == sink)
        row[v] = lp.add_row(lp::RowSense::eq, v == source ? 1.0 : (v == sink ? -1.0 : 0.0));
    for (ArcId a = 0; a < g.arc_count(); ++a) {
      const Arc& arc = g.arc(a);
      if (row[arc.from] < 0 || row[arc.to] < 0 || !(fwd[arc.from] && bwd[arc.to])) continue;
      std::vector<lp::Entry> col{{row[arc.from], 1.0}, {row[arc.to], -1.0}};
      if (capacity_row[a] >= 0) col.push_back({capacity_row[a], 1.0});
      lp.add_column(static_cast<double>(arc.cost), col);
      vars.push_back({p, a});
    }
    std::vector<lp::Entry> bypass{{row[source], 1.0}, {row[sink], -1.0}};
    lp.add_column(inst.params.penalty, bypass);
    vars.push_back({p, std::nullopt});
  }

  lp::LpSolution sol = lp::solve_lp(lp);
  if (sol.status != lp::LpStatus::optimal)
    throw std::runtime_error(std::string("arc formulation not solved: ") +
                             lp::to_string(sol.status));
  ArcFlowResult out;
  out.objective = sol.objective;
  out.flows.resize(passengers);
  out.unserved.assign(passengers, 0.0);
  out.variables = static_cast<std::size_t>(lp.column_count());
  out.rows = static_cast<std::size_t>(lp.row_count());
  for (std::size_t k = 0; k < vars.size(); ++k) {
    double x = sol.primal[k];
    if (x <= 1e-9) continue;
    if (vars[k].arc)
      out.flows[vars[k].passenger].push_back({*vars[k].arc, x});
    else
      out.unserved[vars[k].passenger] = x;
  }
  return out;
}

BruteForceResult solve_bruteforce_ip(const TimeExpandedGraph& g, const Instance& inst,
                                     std::size_t path_limit, double combination_cap) {
  const std::size_t passengers = g.passenger_count();
  const double penalty = inst.params.penalty;
  std::vector<std::vector<GraphPath>> options(passengers);
  BruteForceResult out;
  double combinations = 1.0;
  for (std::size_t p = 0; p < passengers; ++p) {
    PathEnumeration e = enumerate_od_paths(g, p, path_limit);
    if (e.truncated)
      throw OracleRefused("passenger " + inst.requests[p].passenger_id + " has more than " +
                          std::to_string(path_limit) + " paths");
    options[p] = std::move(e.paths);
    std::stable_sort(options[p].begin(), options[p].end(),
                     [](const GraphPath& a, const GraphPath& b) { return a.cost < b.cost; });
    out.path_counts.push_back(options[p].size());
    combinations *= static_cast<double>(options[p].size() + 1);
  }
  if (combinations > combination_cap)
    throw OracleRefused("path assignment space of " + std::to_string(combinations) +
                        " combinations exceeds " + std::to_string(combination_cap));

  // Cheapest option per passenger from p onwards, for pruning.
  std::vector<double> tail(passengers + 1, 0.0);
  for (std::size_t p = passengers; p-- > 0;) {
    double cheapest = penalty;
    if (!options[p].empty()) cheapest = std::min(cheapest, static_cast<double>(options[p][0].cost));
    tail[p] = tail[p + 1] + cheapest;
  }

  std::vector<int> load(g.arc_count(), 0);
  std::vector<int> current(passengers, -1), best(passengers, -1);
  double best_cost = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, double)> search = [&](std::size_t p, double cost) {
    if (cost + tail[p] >= best_cost) return;
    if (p == passengers) {
      best_cost = cost;
      best = current;
      return;
    }
    for (std::size_t k = 0; k < options[p].size(); ++k) {
      const GraphPath& path = options[p][k];
      bool fits = true;
      for (ArcId a : path.arcs)
        if (g.arc(a).capacitated() && load[a] + 1 > g.arc(a).capacity) fits = false;
      if (!fits) continue;
      for (ArcId a : path.arcs) ++load[a];
      current[p] = static_cast<int>(k);
      search(p + 1, cost + static_cast<double>(path.cost));
      for (ArcId a : path.arcs) --load[a];
    }
    current[p] = -1;
    search(p + 1, cost + penalty);
  };
  search(0, 0.0);

  out.cost = best_cost;
  out.assignment.resize(passengers);
  for (std::size_t p = 0; p < passengers; ++p)
    if (best[p] >= 0) out.assignment[p] = options[p][best[p]];
  return out;
}

}  // namespace sysopt
