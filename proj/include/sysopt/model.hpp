// Problem instances, solution paths and feasibility checks for capacitated
// intermodal scheduled networks.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sysopt {

/// Abstract integer timestep (seconds when ingested from clock times).
using Time = std::int64_t;

struct Coordinate {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

struct Request {
  std::string passenger_id;
  Coordinate origin;
  Coordinate destination;
  Time depart = 0;

  friend bool operator==(const Request&, const Request&) = default;
};

struct Stop {
  std::string stop_id;
  Coordinate location;

  friend bool operator==(const Stop&, const Stop&) = default;
};

struct Visit {
  std::string stop_id;
  Time arrival = 0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

/// One vehicle trip: timetabled stops in visiting order.
struct RouteSchedule {
  std::string route_id;
  std::vector<Visit> visits;
  int capacity = 1;

  friend bool operator==(const RouteSchedule&, const RouteSchedule&) = default;
};

enum class DistanceMetric { euclidean, manhattan, matrix };

struct Parameters {
  double walk_speed = 1.0;  // length units per timestep
  double max_access = 0.0;
  double max_egress = 0.0;
  double max_walk = 0.0;
  Time max_wait = 0;
  Time max_travel = 0;
  double penalty = 0.0;  // cost of leaving a passenger unserved
  DistanceMetric metric = DistanceMetric::euclidean;

  friend bool operator==(const Parameters&, const Parameters&) = default;
};

/// Penalty used when none is configured.
inline double default_penalty(Time max_travel) { return 10.0 * static_cast<double>(max_travel); }

/// A place a passenger can be at: a stop, or the origin/destination of a passenger.
struct PlaceKey {
  enum class Kind { stop, origin, destination };
  Kind kind = Kind::stop;
  std::string id;

  friend auto operator<=>(const PlaceKey&, const PlaceKey&) = default;
  friend bool operator==(const PlaceKey&, const PlaceKey&) = default;
};

/// Explicit symmetric distances between places. Missing pairs are unreachable.
class DistanceTable {
 public:
  void set(const PlaceKey& a, const PlaceKey& b, double distance);
  std::optional<double> find(const PlaceKey& a, const PlaceKey& b) const;
  const std::map<std::pair<PlaceKey, PlaceKey>, double>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  friend bool operator==(const DistanceTable&, const DistanceTable&) = default;

 private:
  std::map<std::pair<PlaceKey, PlaceKey>, double> entries_;
};

struct Instance {
  std::vector<Stop> stops;
  std::vector<RouteSchedule> routes;
  std::vector<Request> requests;
  Parameters params;
  std::optional<DistanceTable> distances;

  std::optional<std::size_t> stop_index(const std::string& stop_id) const;
  std::optional<std::size_t> route_index(const std::string& route_id) const;
  std::optional<std::size_t> passenger_index(const std::string& passenger_id) const;

  /// Distance between stops by index; +inf when the matrix has no entry.
  double stop_distance(std::size_t a, std::size_t b) const;
  double access_distance(std::size_t passenger, std::size_t stop) const;
  double egress_distance(std::size_t stop, std::size_t passenger) const;

  /// Walking time for a distance, rounded up to whole timesteps.
  Time walk_time(double distance) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  double distance_between(const PlaceKey& a, const Coordinate& ca, const PlaceKey& b,
                          const Coordinate& cb) const;
};

struct Violation {
  std::string code;
  std::string detail;
};

/// Checks every structural invariant of an instance. Empty result means valid.
std::vector<Violation> validate_instance(const Instance& inst);

/// One (place, time) tuple of a passenger path. `route_id` names the vehicle
/// ridden to reach this leg, or is empty when it was reached by walking or waiting.
struct Leg {
  PlaceKey::Kind kind = PlaceKey::Kind::stop;
  std::string stop_id;  // empty for origin/destination legs
  Time time = 0;
  std::string route_id;

  friend bool operator==(const Leg&, const Leg&) = default;
};

struct SolutionPath {
  std::string passenger_id;
  bool served = false;  // false is the INFEASIBLE marker (empty path, cost = penalty)
  std::vector<Leg> legs;
  double cost = 0.0;

  friend bool operator==(const SolutionPath&, const SolutionPath&) = default;
};

struct Solution {
  std::vector<SolutionPath> paths;
  double total_cost = 0.0;
  double bound = 0.0;
  double gap = 0.0;
};

/// (total − bound) / total, or 0 when total is not positive.
double relative_gap(double total_cost, double bound);

/// Thrown for paths whose structure cannot be interpreted at all.
class MalformedPath : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct FeasibilityResult {
  bool feasible = true;
  std::string violated;  // "(ii)", "(iii)", "(iv)", "(v)", "(vi)" or empty
  std::string detail;
};

/// Checks transitions, access, egress, first wait and deadline of one path, in that
/// order. Capacity is checked by check_solution_capacity.
FeasibilityResult check_path_feasibility(const Instance& inst, const SolutionPath& path);

/// True iff no consecutive timetabled stop pair carries more riders than its vehicle capacity.
bool check_solution_capacity(const Instance& inst, const Solution& sol);

}  // namespace sysopt
