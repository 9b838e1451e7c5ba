#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support/fixtures.hpp"
#include "support/random_instance.hpp"
#include "support/shortest.hpp"
#include "sysopt/pricing.hpp"

using namespace sysopt;
using testing_support::load_fixture;

namespace {

DualSnapshot zero_duals(const TimeExpandedGraph& g) {
  return {std::vector<double>(g.arc_count(), 0.0), std::vector<double>(g.passenger_count(), 0.0)};
}

/// Exact reduced-cost distance from every vertex to the destination of p.
std::vector<double> distances_to_destination(const TimeExpandedGraph& g, const DualSnapshot& d,
                                             std::size_t p) {
  return testing_support::distances_to(g, g.destination(p),
                                       [&](ArcId a) { return reduced_arc_cost(g, d, a); });
}

ArcId r1_arc(const TimeExpandedGraph& g) {
  return *g.find_arc(*g.find_route_node(0, 5, 0), *g.find_route_node(1, 6, 0));
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("contracted graph of the illustrative instance") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);
  ContractedGraph h = build_contracted_graph(g, inst);
  CHECK(h.stop_count() == 3);
  CHECK(h.arc_cost(0, 1) == 1);
  CHECK(h.arc_cost(1, 2) == 1);
  CHECK(h.arc_cost(0, 2) == 2);
  CHECK(h.arc_cost(2, 0) == 2);
  CHECK_FALSE(h.arc_cost(2, 1).has_value());
  CHECK_FALSE(h.arc_cost(1, 0).has_value());
  CHECK(h.stop_arcs().size() == 4);
  std::map<int, Time> egress;
  for (const auto& e : h.egress_arcs(0)) egress[e.stop] = e.cost;
  CHECK(egress == std::map<int, Time>{{1, 1}, {2, 7}});

  auto hp = stop_heuristic(h, 0);
  CHECK(hp[1] == 1.0);
  CHECK(hp[0] == 2.0);
  CHECK(hp[2] == 4.0);

  auto per_vertex = compute_heuristic(h, g, 0);
  CHECK(per_vertex[g.destination(0)] == 0.0);
  CHECK(per_vertex[*g.find_wait(2, 3)] == 4.0);
  CHECK(per_vertex[*g.find_route_node(0, 5, 0)] == 2.0);
}

TEST_CASE("contracted graph edge cases") {
  Instance inst = load_fixture("illustrative");
  SUBCASE("no routes") {
    inst.routes.clear();
    TimeExpandedGraph g = build_graph(inst);
    ContractedGraph h = build_contracted_graph(g, inst);
    CHECK(h.stop_arcs().empty());
    CHECK(h.egress_arcs(0).empty());
    auto hp = stop_heuristic(h, 0);
    for (double v : hp) CHECK(v == kInfinity);
  }
  SUBCASE("bundle minimum over two trips") {
    Instance two;
    two.stops = {{"a", {0, 0}}, {"b", {100, 0}}};
    two.routes = {{"fast", {{"a", 1}, {"b", 4}}, 1}, {"slow", {{"a", 2}, {"b", 7}}, 1}};
    two.params = {1.0, 1.0, 1.0, 1.0, 4, 20, 200.0, DistanceMetric::euclidean};
    TimeExpandedGraph g = build_graph(two);
    ContractedGraph h = build_contracted_graph(g, two);
    CHECK(h.arc_cost(0, 1) == 3);
  }
  SUBCASE("other passengers' destinations are unreachable for the estimate") {
    inst.requests.push_back({"p2", {0, 0}, {0, 0}, 0});
    inst.distances->set({PlaceKey::Kind::destination, "p2"}, {PlaceKey::Kind::stop, "s2"}, 1.0);
    TimeExpandedGraph g = build_graph(inst);
    ContractedGraph h = build_contracted_graph(g, inst);
    auto h1 = compute_heuristic(h, g, 0);
    CHECK(h1[g.destination(1)] == kInfinity);
    CHECK(h1[g.destination(0)] == 0.0);
  }
}

TEST_CASE("pricing on the illustrative instance") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);
  ContractedGraph h = build_contracted_graph(g, inst);
  HeuristicOracle oracle(h, g);
  HeuristicOracle zero = HeuristicOracle::zero(g);
  const double rho = inst.params.penalty;
  DualSnapshot d = zero_duals(g);

  auto both = [&](double alpha) {
    PricingResult a = price_dijkstra(g, d, 0, alpha, rho);
    PricingResult b = price_astar(g, d, 0, alpha, rho, oracle);
    PricingResult z = price_astar(g, d, 0, alpha, rho, zero);
    CHECK(a.objective == b.objective);
    CHECK(b.expanded <= a.expanded);
    CHECK(z.expanded == a.expanded);
    CHECK(z.path == a.path);
    return std::make_pair(a, b);
  };

  SUBCASE("dummy duals") {
    auto [dij, ast] = both(rho);
    CHECK(dij.objective == 7.0 - rho);
    REQUIRE(dij.path);
    CHECK(dij.path->cost == 7);
    CHECK(ast.path->cost == 7);
  }
  SUBCASE("converged duals") {
    auto [dij, ast] = both(7.0);
    CHECK(dij.objective == 0.0);
  }
  SUBCASE("penalised vehicle") {
    d.arc[r1_arc(g)] = -5.0;
    auto [dij, ast] = both(7.0);
    CHECK(dij.objective == 3.0);
    REQUIRE(dij.path);
    CHECK(dij.path->cost == 10);
    CHECK(dij.path_reduced_cost == 10.0);
  }
}

TEST_CASE("unreachable destination") {
  Instance inst = load_fixture("illustrative");
  inst.params.max_egress = 0.5;
  TimeExpandedGraph g = build_graph(inst);
  ContractedGraph h = build_contracted_graph(g, inst);
  HeuristicOracle oracle(h, g);
  DualSnapshot d = zero_duals(g);
  PricingResult a = price_dijkstra(g, d, 0, 40.0, inst.params.penalty);
  PricingResult b = price_astar(g, d, 0, 40.0, inst.params.penalty, oracle);
  CHECK_FALSE(a.path);
  CHECK_FALSE(b.path);
  CHECK(a.objective == inst.params.penalty - 40.0);
  CHECK(b.objective == a.objective);
  CHECK(b.expanded <= a.expanded);
}

TEST_CASE("pricing filter") {
  SUBCASE("zero duals give an empty pool") {
    Instance inst = load_fixture("illustrative");
    TimeExpandedGraph g = build_graph(inst);
    MasterProblem m(g, inst);
    for (const auto& p : enumerate_od_paths(g, 0, 10).paths) m.add_path_column(p);
    MasterSolve s = m.solve();
    CHECK(pricing_filter(m, s.duals).empty());
  }
  SUBCASE("contention selects both passengers") {
    Instance inst = load_fixture("contention");
    TimeExpandedGraph g = build_graph(inst);
    MasterProblem m(g, inst);
    for (std::size_t p = 0; p < 2; ++p)
      for (const auto& path : enumerate_od_paths(g, p, 100).paths) m.add_path_column(path);
    MasterSolve s = m.solve();
    CHECK(pricing_filter(m, s.duals) == std::vector<std::size_t>{0, 1});
  }
  SUBCASE("negative dual on an unused arc") {
    Instance inst = load_fixture("illustrative");
    TimeExpandedGraph g = build_graph(inst);
    MasterProblem m(g, inst);
    for (const auto& p : enumerate_od_paths(g, 0, 10).paths) m.add_path_column(p);
    m.solve();
    DualSnapshot d = zero_duals(g);
    ArcId unused = *g.find_arc(*g.find_route_node(1, 2, 1), *g.find_route_node(2, 3, 1));
    d.arc[unused] = -3.0;
    CHECK(pricing_filter(m, d).empty());
    d.arc[r1_arc(g)] = -1.0;
    CHECK(pricing_filter(m, d) == std::vector<std::size_t>{0});
  }
}

TEST_CASE("estimates are admissible under random nonpositive duals") {
  std::size_t violations = 0;
  std::size_t checked = 0;
  for (std::uint64_t seed : testing_support::family_seeds(20)) {
    Instance inst = testing_support::random_instance(seed);
    TimeExpandedGraph g = build_graph(inst);
    ContractedGraph h = build_contracted_graph(g, inst);
    testing_support::Rng rng(seed * 7 + 1);
    for (int trial = 0; trial < 5; ++trial) {
      DualSnapshot d = zero_duals(g);
      for (ArcId a : g.capacitated_arcs())
        if (rng.between(0, 2) == 0) d.arc[a] = -static_cast<double>(rng.between(1, 40)) / 4.0;
      for (std::size_t p = 0; p < g.passenger_count(); ++p) {
        auto hp = compute_heuristic(h, g, p);
        auto exact = distances_to_destination(g, d, p);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
          if (g.vertex(v).kind == VertexKind::origin) continue;
          ++checked;
          if (hp[v] > exact[v] + 1e-9) ++violations;
        }
      }
    }
  }
  CHECK(checked > 0);
  CHECK(violations == 0);
}

TEST_CASE("A* and Dijkstra agree on random instances and duals") {
  for (std::uint64_t seed : testing_support::family_seeds(30)) {
    Instance inst = testing_support::random_instance(seed);
    TimeExpandedGraph g = build_graph(inst);
    ContractedGraph h = build_contracted_graph(g, inst);
    HeuristicOracle oracle(h, g);
    testing_support::Rng rng(seed + 99);
    DualSnapshot d = zero_duals(g);
    for (ArcId a : g.capacitated_arcs())
      if (rng.between(0, 1) == 0) d.arc[a] = -static_cast<double>(rng.between(1, 20));
    for (std::size_t p = 0; p < g.passenger_count(); ++p) {
      double alpha = static_cast<double>(rng.between(0, 60));
      PricingResult a = price_dijkstra(g, d, p, alpha, inst.params.penalty);
      PricingResult b = price_astar(g, d, p, alpha, inst.params.penalty, oracle);
      CHECK(a.objective == b.objective);
      CHECK(b.expanded <= a.expanded);
      CHECK(a.path.has_value() == b.path.has_value());
      if (a.path) {
        double reduced = 0.0;
        for (ArcId arc : b.path->arcs) reduced += reduced_arc_cost(g, d, arc);
        CHECK(reduced == b.path_reduced_cost);
        auto exact = distances_to_destination(g, d, p);
        CHECK(a.path_reduced_cost == doctest::Approx(exact[g.origin(p)]));
      }
    }
  }
}

TEST_CASE("stop distance cache") {
  Instance inst = load_fixture("illustrative");
  TimeExpandedGraph g = build_graph(inst);
  TempFile cache("sysopt_sigma_cache_test.csv");

  ContractedGraph first = build_contracted_graph(g, inst, cache.path.string());
  CHECK_FALSE(first.loaded_from_cache());
  REQUIRE(std::filesystem::exists(cache.path));
  ContractedGraph second = build_contracted_graph(g, inst, cache.path.string());
  CHECK(second.loaded_from_cache());
  CHECK(second.stop_distances() == first.stop_distances());

  SUBCASE("a different network invalidates the cache") {
    Instance other = inst;
    other.routes[0].visits[1].arrival = 9;
    TimeExpandedGraph g2 = build_graph(other);
    ContractedGraph third = build_contracted_graph(g2, other, cache.path.string());
    CHECK_FALSE(third.loaded_from_cache());
    CHECK(third.network_hash() != first.network_hash());
  }
  SUBCASE("a corrupt cache is ignored") {
    {
      std::ofstream out(cache.path);
      out << "garbage\n";
    }
    ContractedGraph fourth = build_contracted_graph(g, inst, cache.path.string());
    CHECK_FALSE(fourth.loaded_from_cache());
    CHECK(fourth.stop_distances() == first.stop_distances());
  }
  SUBCASE("save and load round trip with unreachable pairs") {
    std::vector<std::vector<double>> sigma{{0.0, kInfinity}, {2.5, 0.0}};
    save_stop_distances(cache.path.string(), 42, sigma);
    CHECK(load_stop_distances(cache.path.string(), 42, 2) == sigma);
    CHECK_FALSE(load_stop_distances(cache.path.string(), 43, 2));
    CHECK_FALSE(load_stop_distances(cache.path.string(), 42, 3));
  }
}
