#include "sysopt/master.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sysopt {

namespace {

std::uint64_t path_hash(std::size_t passenger, const std::vector<ArcId>& arcs) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(passenger);
  for (ArcId a : arcs) mix(a);
  return h;
}

}  // namespace

bool DualSnapshot::same_as(const DualSnapshot& other, double tol) const {
  if (arc.size() != other.arc.size() || passenger.size() != other.passenger.size()) return false;
  for (std::size_t i = 0; i < arc.size(); ++i)
    if (std::abs(arc[i] - other.arc[i]) > tol) return false;
  for (std::size_t i = 0; i < passenger.size(); ++i)
    if (std::abs(passenger[i] - other.passenger[i]) > tol) return false;
  return true;
}

MasterProblem::MasterProblem(const TimeExpandedGraph& g, const Instance& inst,
                             std::unique_ptr<lp::LpEngine> engine)
    : graph_(g),
      passengers_(g.passenger_count()),
      penalty_(inst.params.penalty),
      engine_(engine ? std::move(engine) : std::make_unique<lp::SimplexEngine>()) {
  arc_row_.assign(g.arc_count(), -1);
  for (ArcId a : g.capacitated_arcs()) {
    arc_row_[a] = lp_.add_row(lp::RowSense::le, g.arc(a).capacity);
    capacity_arcs_.push_back(a);
  }
  for (std::size_t p = 0; p < passengers_; ++p) lp_.add_row(lp::RowSense::eq, 1.0);
  for (std::size_t p = 0; p < passengers_; ++p) {
    lp::Entry e{convexity_row(p), 1.0};
    lp_.add_column(penalty_, std::span<const lp::Entry>(&e, 1));
    columns_.push_back({p, ColumnOrigin::dummy, penalty_, {}});
  }
  duals_.arc.assign(g.arc_count(), 0.0);
  duals_.passenger.assign(passengers_, 0.0);
}

std::optional<int> MasterProblem::capacity_row(ArcId arc) const {
  if (arc_row_[arc] < 0) return std::nullopt;
  return arc_row_[arc];
}

std::size_t MasterProblem::add_path_column(const GraphPath& path) {
  if (path.passenger >= passengers_) throw std::invalid_argument("path for unknown passenger");
  if (path.vertices.empty() || path.vertices.front() != graph_.origin(path.passenger) ||
      path.vertices.back() != graph_.destination(path.passenger))
    throw std::invalid_argument("path does not join the passenger's origin and destination");

  std::uint64_t h = path_hash(path.passenger, path.arcs);
  auto& bucket = by_hash_[h];
  for (std::size_t id : bucket) {
    const Column& c = columns_[id];
    if (c.passenger == path.passenger && c.path.arcs == path.arcs) {
      last_add_new_ = false;
      return id;
    }
  }

  std::vector<lp::Entry> entries;
  double cost = 0.0;
  for (ArcId a : path.arcs) {
    cost += static_cast<double>(graph_.arc(a).cost);
    if (arc_row_[a] < 0) continue;
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const lp::Entry& e) { return e.index == arc_row_[a]; });
    if (it == entries.end())
      entries.push_back({arc_row_[a], 1.0});
    else
      it->value += 1.0;
  }
  entries.push_back({convexity_row(path.passenger), 1.0});
  lp_.add_column(cost, entries);
  columns_.push_back({path.passenger, ColumnOrigin::generated, cost, path});
  bucket.push_back(columns_.size() - 1);
  last_add_new_ = true;
  return columns_.size() - 1;
}

MasterSolve MasterProblem::solve() {
  const lp::Basis* warm = last_ ? &last_->basis : nullptr;
  lp::LpSolution sol = engine_->solve(lp_, warm);
  if (sol.status == lp::LpStatus::infeasible) throw RmpInfeasible("Error: RMP infeasible");

  DualSnapshot duals;
  duals.arc.assign(graph_.arc_count(), 0.0);
  duals.passenger.assign(passengers_, 0.0);
  if (sol.status == lp::LpStatus::optimal) {
    for (ArcId a : capacity_arcs_) duals.arc[a] = std::min(0.0, sol.duals[arc_row_[a]]);
    for (std::size_t p = 0; p < passengers_; ++p)
      duals.passenger[p] = sol.duals[convexity_row(p)];
  }
  MasterSolve out{sol.status, sol.objective, duals};
  last_ = std::move(sol);
  duals_ = out.duals;
  return out;
}

FractionalSolution MasterProblem::extract_solution(double tol) const {
  FractionalSolution out;
  out.passengers.resize(passengers_);
  for (std::size_t p = 0; p < passengers_; ++p) out.passengers[p].passenger = p;
  if (!last_) return out;
  out.objective = last_->objective;
  for (std::size_t id = 0; id < columns_.size(); ++id) {
    double w = id < last_->primal.size() ? last_->primal[id] : 0.0;
    if (w <= tol) continue;
    PassengerShare& share = out.passengers[columns_[id].passenger];
    if (columns_[id].origin == ColumnOrigin::dummy) {
      share.unserved_weight = w;
      share.unserved = true;
    } else {
      share.columns.emplace_back(id, w);
    }
  }
  return out;
}

}  // namespace sysopt
