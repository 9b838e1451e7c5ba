#include "sysopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace sysopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool finite(const Coordinate& c) { return std::isfinite(c.x) && std::isfinite(c.y); }

PlaceKey stop_key(const std::string& id) { return {PlaceKey::Kind::stop, id}; }

}  // namespace

void DistanceTable::set(const PlaceKey& a, const PlaceKey& b, double distance) {
  if (b < a) {
    entries_[{b, a}] = distance;
  } else {
    entries_[{a, b}] = distance;
  }
}

std::optional<double> DistanceTable::find(const PlaceKey& a, const PlaceKey& b) const {
  auto it = b < a ? entries_.find({b, a}) : entries_.find({a, b});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Instance::stop_index(const std::string& stop_id) const {
  for (std::size_t i = 0; i < stops.size(); ++i)
    if (stops[i].stop_id == stop_id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::route_index(const std::string& route_id) const {
  for (std::size_t i = 0; i < routes.size(); ++i)
    if (routes[i].route_id == route_id) return i;
  return std::nullopt;
}

std::optional<std::size_t> Instance::passenger_index(const std::string& passenger_id) const {
  for (std::size_t i = 0; i < requests.size(); ++i)
    if (requests[i].passenger_id == passenger_id) return i;
  return std::nullopt;
}

double Instance::distance_between(const PlaceKey& a, const Coordinate& ca, const PlaceKey& b,
                                  const Coordinate& cb) const {
  switch (params.metric) {
    case DistanceMetric::euclidean:
      return std::hypot(ca.x - cb.x, ca.y - cb.y);
    case DistanceMetric::manhattan:
      return std::abs(ca.x - cb.x) + std::abs(ca.y - cb.y);
    case DistanceMetric::matrix:
      if (a == b) return 0.0;
      if (!distances) return kInf;
      return distances->find(a, b).value_or(kInf);
  }
  return kInf;
}

double Instance::stop_distance(std::size_t a, std::size_t b) const {
  return distance_between(stop_key(stops[a].stop_id), stops[a].location,
                          stop_key(stops[b].stop_id), stops[b].location);
}

double Instance::access_distance(std::size_t passenger, std::size_t stop) const {
  const Request& r = requests[passenger];
  return distance_between({PlaceKey::Kind::origin, r.passenger_id}, r.origin,
                          stop_key(stops[stop].stop_id), stops[stop].location);
}

double Instance::egress_distance(std::size_t stop, std::size_t passenger) const {
  const Request& r = requests[passenger];
  return distance_between(stop_key(stops[stop].stop_id), stops[stop].location,
                          {PlaceKey::Kind::destination, r.passenger_id}, r.destination);
}

Time Instance::walk_time(double distance) const {
  if (!std::isfinite(distance)) return std::numeric_limits<Time>::max() / 4;
  // Quotients that are integral up to rounding noise must not be bumped up.
  double q = distance / params.walk_speed;
  return std::max<Time>(0, static_cast<Time>(std::ceil(q - 1e-9)));
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  auto report = [&](std::string code, std::string detail) {
    out.push_back({std::move(code), std::move(detail)});
  };

  std::set<std::string> stop_ids;
  for (const Stop& s : inst.stops) {
    if (!stop_ids.insert(s.stop_id).second) report("duplicate stop id", s.stop_id);
    if (!finite(s.location)) report("non-finite coordinate", "stop " + s.stop_id);
  }

  std::set<std::string> route_ids;
  for (const RouteSchedule& r : inst.routes) {
    if (!route_ids.insert(r.route_id).second) report("duplicate route id", r.route_id);
    if (r.visits.size() < 2) report("too few visits", r.route_id);
    if (r.capacity < 1) report("nonpositive capacity", r.route_id);
    for (std::size_t i = 0; i < r.visits.size(); ++i) {
      const Visit& v = r.visits[i];
      if (!stop_ids.contains(v.stop_id))
        report("dangling stop reference", r.route_id + " -> " + v.stop_id);
      if (v.arrival < 0) report("negative arrival time", r.route_id);
      if (i > 0 && v.arrival <= r.visits[i - 1].arrival)
        report("non-increasing arrival times",
               r.route_id + " at visit " + std::to_string(i));
    }
  }

  std::set<std::string> passenger_ids;
  for (const Request& q : inst.requests) {
    if (!passenger_ids.insert(q.passenger_id).second)
      report("duplicate passenger id", q.passenger_id);
    if (q.depart < 0) report("negative depart time", q.passenger_id);
    if (!finite(q.origin) || !finite(q.destination))
      report("non-finite coordinate", "passenger " + q.passenger_id);
  }

  const Parameters& p = inst.params;
  if (!(p.walk_speed > 0.0) || !std::isfinite(p.walk_speed))
    report("nonpositive walk speed", std::to_string(p.walk_speed));
  if (p.max_access < 0 || p.max_egress < 0 || p.max_walk < 0 || p.max_wait < 0 ||
      p.max_travel < 0)
    report("negative bound", "distance, wait and travel bounds must be >= 0");
  if (!(p.penalty > static_cast<double>(p.max_travel)))
    report("penalty not above max travel time", std::to_string(p.penalty));
  if (p.metric == DistanceMetric::matrix && !inst.distances)
    report("missing distance matrix", "metric=matrix requires explicit distances");
  if (inst.distances) {
    for (const auto& [key, d] : inst.distances->entries())
      if (!(d >= 0.0)) report("negative distance", key.first.id + " - " + key.second.id);
  }
  return out;
}

double relative_gap(double total_cost, double bound) {
  if (total_cost <= 0.0) return 0.0;
  return (total_cost - bound) / total_cost;
}

namespace {

/// Index of the hop visits[j] -> visits[j+1] of `route` matching the two legs.
std::optional<std::size_t> find_hop(const RouteSchedule& route, const Leg& from, const Leg& to) {
  for (std::size_t j = 0; j + 1 < route.visits.size(); ++j) {
    const Visit& a = route.visits[j];
    const Visit& b = route.visits[j + 1];
    if (a.stop_id == from.stop_id && a.arrival == from.time && b.stop_id == to.stop_id &&
        b.arrival == to.time)
      return j;
  }
  return std::nullopt;
}

FeasibilityResult fail(std::string tag, std::string detail) {
  return {false, std::move(tag), std::move(detail)};
}

}  // namespace

FeasibilityResult check_path_feasibility(const Instance& inst, const SolutionPath& path) {
  auto pidx = inst.passenger_index(path.passenger_id);
  if (!pidx) throw MalformedPath("unknown passenger " + path.passenger_id);
  if (!path.served) {
    if (!path.legs.empty()) throw MalformedPath("unserved path must have no legs");
    return {};
  }
  const Request& req = inst.requests[*pidx];
  const Parameters& prm = inst.params;
  const auto& legs = path.legs;
  if (legs.size() < 3) throw MalformedPath("served path needs origin, a stop and destination");
  if (legs.front().kind != PlaceKey::Kind::origin || legs.front().time != req.depart)
    throw MalformedPath("first leg must be the origin at the departure time");
  if (legs.back().kind != PlaceKey::Kind::destination)
    throw MalformedPath("last leg must be the destination");

  std::vector<std::size_t> stop_of(legs.size(), 0);
  for (std::size_t i = 1; i + 1 < legs.size(); ++i) {
    if (legs[i].kind != PlaceKey::Kind::stop) throw MalformedPath("inner legs must be stops");
    auto s = inst.stop_index(legs[i].stop_id);
    if (!s) throw MalformedPath("unknown stop " + legs[i].stop_id);
    stop_of[i] = *s;
  }
  for (std::size_t i = 1; i < legs.size(); ++i)
    if (legs[i].time < legs[i - 1].time)
      throw MalformedPath("leg times decrease at position " + std::to_string(i));

  // (ii) consecutive stop legs: ride, walk or wait.
  for (std::size_t i = 1; i + 2 < legs.size(); ++i) {
    const Leg& a = legs[i];
    const Leg& b = legs[i + 1];
    bool ok = false;
    if (!b.route_id.empty()) {
      auto r = inst.route_index(b.route_id);
      ok = r && find_hop(inst.routes[*r], a, b).has_value();
    } else {
      for (const RouteSchedule& r : inst.routes)
        if (find_hop(r, a, b)) ok = true;
      if (stop_of[i] == stop_of[i + 1]) {
        ok = ok || a.time < b.time;
      } else {
        double d = inst.stop_distance(stop_of[i], stop_of[i + 1]);
        ok = ok || (d <= prm.max_walk && b.time - a.time >= inst.walk_time(d));
      }
    }
    if (!ok) return fail("(ii)", "no ride, walk or wait explains leg " + std::to_string(i));
  }

  const std::size_t first = 1;
  const std::size_t last_stop = legs.size() - 2;
  double access = inst.access_distance(*pidx, stop_of[first]);
  if (!(access <= prm.max_access) || legs[first].time - req.depart < inst.walk_time(access))
    return fail("(iii)", "origin cannot reach " + legs[first].stop_id);
  double egress = inst.egress_distance(stop_of[last_stop], *pidx);
  if (!(egress <= prm.max_egress) ||
      legs.back().time - legs[last_stop].time < inst.walk_time(egress))
    return fail("(iv)", "destination cannot be reached from " + legs[last_stop].stop_id);
  if (legs[first].time - req.depart > prm.max_wait)
    return fail("(v)", "first boarding opportunity beyond the waiting limit");
  if (legs.back().time > req.depart + prm.max_travel)
    return fail("(vi)", "arrival after the travel-time limit");
  return {};
}

bool check_solution_capacity(const Instance& inst, const Solution& sol) {
  std::map<std::pair<std::size_t, std::size_t>, int> riders;
  for (const SolutionPath& path : sol.paths) {
    if (!path.served) continue;
    for (std::size_t i = 1; i + 1 < path.legs.size(); ++i) {
      const Leg& b = path.legs[i];
      if (b.route_id.empty() || b.kind != PlaceKey::Kind::stop) continue;
      auto r = inst.route_index(b.route_id);
      if (!r) return false;
      auto hop = find_hop(inst.routes[*r], path.legs[i - 1], b);
      if (!hop) return false;
      ++riders[{*r, *hop}];
    }
  }
  for (const auto& [key, count] : riders)
    if (count > inst.routes[key.first].capacity) return false;
  return true;
}

}  // namespace sysopt
