// Restricted master problem over path columns: capacity rows for every
// capacitated arc, one convexity row per passenger, and a dummy column per
// passenger that stands for leaving it unserved.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sysopt/graph.hpp"
#include "sysopt/model.hpp"
#include "sysopt/simplex.hpp"

namespace sysopt {

enum class ColumnOrigin { dummy, generated };

struct Column {
  std::size_t passenger = 0;
  ColumnOrigin origin = ColumnOrigin::dummy;
  double cost = 0.0;
  GraphPath path;  // empty for dummies
};

/// Duals of one master solve. `arc` is dense over graph arcs (0 for uncapacitated arcs).
struct DualSnapshot {
  std::vector<double> arc;
  std::vector<double> passenger;

  /// Componentwise equality within `tol`.
  bool same_as(const DualSnapshot& other, double tol) const;
};

struct MasterSolve {
  lp::LpStatus status = lp::LpStatus::optimal;
  double objective = 0.0;
  DualSnapshot duals;
};

struct PassengerShare {
  std::size_t passenger = 0;
  std::vector<std::pair<std::size_t, double>> columns;  // (column id, weight) with weight > tol
  double unserved_weight = 0.0;
  bool unserved = false;  // dummy carries weight in the relaxation
};

struct FractionalSolution {
  double objective = 0.0;
  std::vector<PassengerShare> passengers;
};

class RmpInfeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MasterProblem {
 public:
  /// Sets up capacity and convexity rows plus one dummy column per passenger.
  MasterProblem(const TimeExpandedGraph& g, const Instance& inst,
                std::unique_ptr<lp::LpEngine> engine = nullptr);

  /// Adds a generated path column; an identical existing column is returned instead.
  std::size_t add_path_column(const GraphPath& path);
  bool last_add_was_new() const { return last_add_new_; }

  MasterSolve solve();

  FractionalSolution extract_solution(double tol = 1e-7) const;

  const std::vector<Column>& columns() const { return columns_; }
  std::size_t column_count() const { return columns_.size(); }
  std::size_t passenger_count() const { return passengers_; }
  const lp::LinearProgram& program() const { return lp_; }
  const std::optional<lp::LpSolution>& last_solution() const { return last_; }
  const DualSnapshot& duals() const { return duals_; }
  const TimeExpandedGraph& graph() const { return graph_; }
  double penalty() const { return penalty_; }

  /// Row of the capacity constraint for an arc, if it has one.
  std::optional<int> capacity_row(ArcId arc) const;
  int convexity_row(std::size_t passenger) const {
    return static_cast<int>(capacity_arcs_.size() + passenger);
  }
  std::span<const ArcId> capacity_arcs() const { return capacity_arcs_; }

 private:
  const TimeExpandedGraph& graph_;
  std::size_t passengers_;
  double penalty_;
  lp::LinearProgram lp_;
  std::unique_ptr<lp::LpEngine> engine_;
  std::vector<ArcId> capacity_arcs_;
  std::vector<int> arc_row_;  // dense over arcs, -1 when uncapacitated
  std::vector<Column> columns_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash_;
  std::optional<lp::LpSolution> last_;
  DualSnapshot duals_;
  bool last_add_new_ = false;
};

}  // namespace sysopt
