#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "support/fixtures.hpp"
#include "support/random_instance.hpp"
#include "support/shortest.hpp"
#include "sysopt/graph.hpp"

using namespace sysopt;
using testing_support::load_fixture;

namespace {

std::vector<const Arc*> arcs_of(const TimeExpandedGraph& g, ArcKind kind) {
  std::vector<const Arc*> out;
  for (const Arc& a : g.arcs())
    if (a.kind == kind) out.push_back(&a);
  return out;
}

std::multiset<Time> costs(const std::vector<const Arc*>& arcs) {
  std::multiset<Time> out;
  for (const Arc* a : arcs) out.insert(a->cost);
  return out;
}

std::vector<std::pair<std::string, Time>> leg_pairs(const SolutionPath& p) {
  std::vector<std::pair<std::string, Time>> out;
  for (const Leg& l : p.legs) {
    std::string place = l.kind == PlaceKey::Kind::origin        ? "o"
                        : l.kind == PlaceKey::Kind::destination ? "d"
                                                                : l.stop_id;
    out.emplace_back(place, l.time);
  }
  return out;
}

}  // namespace

TEST_CASE("illustrative graph arcs") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);

  auto access = arcs_of(g, ArcKind::access);
  REQUIRE(access.size() == 1);
  CHECK(g.label(access[0]->from, inst) == "O:p1");
  CHECK(g.label(access[0]->to, inst) == "W:s3@3");
  CHECK(access[0]->cost == 3);

  auto egress = arcs_of(g, ArcKind::egress);
  CHECK(costs(egress) == std::multiset<Time>{1, 1, 7});
  std::set<std::string> egress_sources;
  for (const Arc* a : egress) egress_sources.insert(g.label(a->from, inst));
  CHECK(egress_sources == std::set<std::string>{"W:s2@2", "W:s2@6", "W:s3@3"});

  auto walking = arcs_of(g, ArcKind::walking);
  REQUIRE(walking.size() == 2);
  std::set<std::pair<std::string, std::string>> walks;
  for (const Arc* a : walking) {
    CHECK(a->cost == 2);
    walks.insert({g.label(a->from, inst), g.label(a->to, inst)});
  }
  CHECK(walks == std::set<std::pair<std::string, std::string>>{{"W:s1@1", "W:s3@3"},
                                                               {"W:s3@3", "W:s1@5"}});

  auto route = arcs_of(g, ArcKind::route);
  CHECK(route.size() == 4);
  for (const Arc* a : route) CHECK(a->capacity == 1);
  CHECK(g.capacitated_arcs().size() == 4);
  CHECK(arcs_of(g, ArcKind::waiting).size() == 3);
  CHECK(arcs_of(g, ArcKind::transit).size() == 14);
}

TEST_CASE("illustrative arc dump matches the golden file") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);
  std::ostringstream out;
  write_arcs_csv(g, inst, out);
  std::ifstream golden(std::string(SYSOPT_GOLDEN_DIR) + "/illustrative_arcs.csv");
  std::stringstream expected;
  expected << golden.rdbuf();
  CHECK(out.str() == expected.str());
}

TEST_CASE("illustrative o-d paths and reconstruction") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);
  PathEnumeration e = enumerate_od_paths(g, 0, 100);
  CHECK_FALSE(e.truncated);
  REQUIRE(e.paths.size() == 2);
  std::multiset<Time> path_costs;
  for (const GraphPath& p : e.paths) path_costs.insert(p.cost);
  CHECK(path_costs == std::multiset<Time>{7, 10});

  for (const GraphPath& p : e.paths) {
    SolutionPath sp = reconstruct_solution_path(g, p, inst);
    CHECK(sp.served);
    CHECK(sp.cost == static_cast<double>(p.cost));
    if (p.cost == 7) {
      CHECK(leg_pairs(sp) == std::vector<std::pair<std::string, Time>>{
                                 {"o", 0}, {"s3", 3}, {"s1", 5}, {"s2", 6}, {"d", 7}});
      CHECK(sp.legs[3].route_id == "r1");
      CHECK(sp.legs[2].route_id.empty());
    } else {
      CHECK(leg_pairs(sp) ==
            std::vector<std::pair<std::string, Time>>{{"o", 0}, {"s3", 3}, {"d", 10}});
    }
  }
  CHECK(enumerate_od_paths(g, 0, 1).truncated);
}

TEST_CASE("instance without routes") {
  Instance inst = load_fixture("illustrative");
  inst.routes.clear();
  TimeExpandedGraph g = build_graph(inst);
  CHECK(g.vertex_count() == 2);
  CHECK(g.arc_count() == 0);
  CHECK(enumerate_od_paths(g, 0, 10).paths.empty());
}

TEST_CASE("direct service on a two-stop line") {
  Instance inst;
  inst.stops = {{"a", {0, 0}}, {"b", {10, 0}}};
  inst.routes = {{"r", {{"a", 2}, {"b", 5}}, 2}};
  inst.requests = {{"p", {0, 0}, {10, 0}, 0}};
  inst.params = {1.0, 1.0, 1.0, 1.0, 4, 20, 200.0, DistanceMetric::euclidean};
  TimeExpandedGraph g = build_graph(inst);
  PathEnumeration e = enumerate_od_paths(g, 0, 100);
  REQUIRE(e.paths.size() == 1);
  CHECK(e.paths[0].cost == 5);
  SolutionPath sp = reconstruct_solution_path(g, e.paths[0], inst);
  CHECK(leg_pairs(sp) ==
        std::vector<std::pair<std::string, Time>>{{"o", 0}, {"a", 2}, {"b", 5}, {"d", 5}});
}

TEST_CASE("access and egress at the same waiting node") {
  Instance inst;
  inst.stops = {{"a", {0, 0}}, {"b", {50, 0}}};
  inst.routes = {{"r", {{"a", 3}, {"b", 9}}, 1}};
  inst.requests = {{"p", {0, 1}, {0, 2}, 0}};
  inst.params = {1.0, 1.0, 2.0, 0.0, 5, 20, 200.0, DistanceMetric::euclidean};
  TimeExpandedGraph g = build_graph(inst);
  PathEnumeration e = enumerate_od_paths(g, 0, 100);
  REQUIRE(e.paths.size() == 1);
  CHECK(e.paths[0].arcs.size() == 2);
  CHECK(e.paths[0].cost == 3 + 2);
  SolutionPath sp = reconstruct_solution_path(g, e.paths[0], inst);
  CHECK(leg_pairs(sp) == std::vector<std::pair<std::string, Time>>{{"o", 0}, {"a", 3}, {"d", 5}});
  CHECK(sp.cost == 5.0);
}

TEST_CASE("structural invariants on random instances") {
  for (std::uint64_t seed : testing_support::family_seeds()) {
    Instance inst = testing_support::random_instance(seed);
    TimeExpandedGraph g = build_graph(inst);
    std::set<std::pair<int, Time>> waits;
    std::set<std::tuple<int, Time, int>> route_nodes;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      const Vertex& x = g.vertex(v);
      if (x.kind == VertexKind::wait) CHECK(waits.insert({x.stop, x.time}).second);
      if (x.kind == VertexKind::route)
        CHECK(route_nodes.insert({x.stop, x.time, x.route}).second);
    }
    for (ArcId a = 0; a < g.arc_count(); ++a) {
      const Arc& arc = g.arc(a);
      const Vertex& u = g.vertex(arc.from);
      const Vertex& w = g.vertex(arc.to);
      CHECK(arc.cost >= 0);
      CHECK(arc.capacitated() == (arc.kind == ArcKind::route));
      switch (arc.kind) {
        case ArcKind::route:
        case ArcKind::waiting:
        case ArcKind::walking:
          CHECK(w.time > u.time);
          CHECK(arc.cost == w.time - u.time);
          break;
        case ArcKind::transit:
          CHECK(u.stop == w.stop);
          CHECK(u.time == w.time);
          CHECK(arc.cost == 0);
          break;
        case ArcKind::access:
          CHECK(u.kind == VertexKind::origin);
          CHECK(arc.cost == w.time - inst.requests[u.passenger].depart);
          break;
        case ArcKind::egress:
          CHECK(w.kind == VertexKind::destination);
          break;
      }
    }
  }
}

TEST_CASE("earliest-only walking arcs keep every distance") {
  for (std::uint64_t seed : testing_support::family_seeds()) {
    Instance inst = testing_support::random_instance(seed);
    TimeExpandedGraph lean = build_graph(inst);
    TimeExpandedGraph full = build_graph(inst, {.all_walk_targets = true});
    CHECK(full.arc_count() >= lean.arc_count());
    for (std::size_t p = 0; p < inst.requests.size(); ++p)
      CHECK(testing_support::static_distance(lean, p) ==
            testing_support::static_distance(full, p));
  }
}

TEST_CASE("pruning keeps every distance") {
  for (std::uint64_t seed : testing_support::family_seeds()) {
    Instance inst = testing_support::random_instance(seed);
    TimeExpandedGraph g = build_graph(inst);
    TimeExpandedGraph pruned = build_graph(inst, {.prune = true});
    CHECK(pruned.vertex_count() <= g.vertex_count());
    for (std::size_t p = 0; p < inst.requests.size(); ++p)
      CHECK(testing_support::static_distance(g, p) ==
            testing_support::static_distance(pruned, p));
  }
}

TEST_CASE("removing a passenger leaves the others' distances unchanged") {
  for (std::uint64_t seed : testing_support::family_seeds(20)) {
    Instance inst = testing_support::random_instance(seed);
    if (inst.requests.size() < 2) continue;
    TimeExpandedGraph g = build_graph(inst);
    Instance reduced = inst;
    reduced.requests.erase(reduced.requests.begin());
    TimeExpandedGraph h = build_graph(reduced);
    for (std::size_t p = 1; p < inst.requests.size(); ++p)
      CHECK(testing_support::static_distance(g, p) ==
            testing_support::static_distance(h, p - 1));
  }
}

TEST_CASE("enumerated paths are valid and cheapest matches shortest distance") {
  for (std::uint64_t seed : testing_support::family_seeds(20)) {
    Instance inst = testing_support::random_instance(seed, {6, 3, 5, 2});
    TimeExpandedGraph g = build_graph(inst);
    for (std::size_t p = 0; p < inst.requests.size(); ++p) {
      PathEnumeration e = enumerate_od_paths(g, p, 5000);
      REQUIRE_FALSE(e.truncated);
      double best = std::numeric_limits<double>::infinity();
      for (const GraphPath& path : e.paths) {
        REQUIRE(path.vertices.size() == path.arcs.size() + 1);
        CHECK(path.vertices.front() == g.origin(p));
        CHECK(path.vertices.back() == g.destination(p));
        Time sum = 0;
        for (std::size_t i = 0; i < path.arcs.size(); ++i) {
          CHECK(g.arc(path.arcs[i]).from == path.vertices[i]);
          CHECK(g.arc(path.arcs[i]).to == path.vertices[i + 1]);
          sum += g.arc(path.arcs[i]).cost;
        }
        CHECK(sum == path.cost);
        CHECK(make_path(g, p, path.arcs) == path);
        best = std::min(best, static_cast<double>(path.cost));
      }
      CHECK(best == testing_support::static_distance(g, p));
    }
  }
}
