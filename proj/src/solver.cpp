#include "sysopt/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sysopt {

const char* to_string(PricerKind kind) {
  return kind == PricerKind::astar ? "astar" : "dijkstra";
}

const char* to_string(CgStatus status) {
  switch (status) {
    case CgStatus::optimal: return "optimal";
    case CgStatus::iteration_limit: return "iteration_limit";
    case CgStatus::time_limit: return "time_limit";
  }
  return "?";
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::vector<PricingResult> price_pool(const TimeExpandedGraph& g, const DualSnapshot& duals,
                                      const std::vector<std::size_t>& pool, double penalty,
                                      const CgConfig& cfg, const HeuristicOracle* oracle) {
  std::vector<PricingResult> results(pool.size());
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      std::size_t p = pool[k];
      double alpha = duals.passenger[p];
      results[k] = cfg.pricer == PricerKind::astar
                       ? price_astar(g, duals, p, alpha, penalty, *oracle)
                       : price_dijkstra(g, duals, p, alpha, penalty);
    }
  };
  std::size_t threads = static_cast<std::size_t>(std::max(1, cfg.threads));
  threads = std::min(threads, pool.size());
  if (threads <= 1) {
    work(0, pool.size());
    return results;
  }
  std::vector<std::thread> workers;
  std::size_t chunk = (pool.size() + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    std::size_t begin = t * chunk;
    std::size_t end = std::min(pool.size(), begin + chunk);
    if (begin < end) workers.emplace_back(work, begin, end);
  }
  for (auto& w : workers) w.join();
  return results;
}

}  // namespace

CgRun run_column_generation(const TimeExpandedGraph& g, const Instance& inst, const CgConfig& cfg,
                            const HeuristicOracle* oracle, const PricingObserver& observer) {
  if (cfg.pricer == PricerKind::astar && oracle == nullptr)
    throw std::invalid_argument("the A* pricer needs a heuristic oracle");
  const auto start = Clock::now();
  CgRun run{MasterProblem(g, inst, cfg.engine_factory ? cfg.engine_factory() : nullptr), {}, {}, {}};
  CgReport& report = run.report;
  const std::size_t passengers = g.passenger_count();
  std::vector<std::size_t> everyone(passengers);
  for (std::size_t p = 0; p < passengers; ++p) everyone[p] = p;

  double lower_bound = 0.0;
  std::optional<DualSnapshot> previous_duals;
  bool previous_full = false;
  bool previous_improving = false;  // last filtered pass added columns and lowered the objective
  double objective_before_pass = kInfinity;

  for (int iteration = 1;; ++iteration) {
    const auto iter_start = Clock::now();
    MasterSolve solved = run.master.solve();
    if (solved.status != lp::LpStatus::optimal)
      throw std::runtime_error(std::string("master LP not solved to optimality: ") +
                               lp::to_string(solved.status));
    run.dual_history.push_back(solved.duals);
    const double objective = solved.objective;
    report.objective = objective;
    const double tol = cfg.tol_optimality * std::max(1.0, std::abs(objective));

    if (lower_bound >= objective - tol) break;
    if (previous_duals && previous_full && solved.duals.same_as(*previous_duals, cfg.tol_dual))
      break;
    if (iteration > cfg.max_iterations) {
      report.status = CgStatus::iteration_limit;
      break;
    }
    if (elapsed_ms(start) > cfg.time_limit_seconds * 1000.0) {
      report.status = CgStatus::time_limit;
      break;
    }
    if (previous_full == false && previous_duals && objective >= objective_before_pass - tol)
      previous_improving = false;

    // A filtered pass is allowed only while filtered passes keep improving the
    // objective; otherwise every passenger is priced before optimality can be claimed.
    bool full = true;
    std::vector<std::size_t> pool = everyone;
    if (cfg.use_filter && (previous_full || previous_improving)) {
      std::vector<std::size_t> filtered = pricing_filter(run.master, solved.duals, cfg.tol_dual);
      if (!filtered.empty() && filtered.size() < passengers) {
        pool = std::move(filtered);
        full = false;
      }
    }

    std::vector<PricingResult> results =
        price_pool(g, solved.duals, pool, run.master.penalty(), cfg, oracle);
    if (!full && std::none_of(results.begin(), results.end(), [&](const PricingResult& r) {
          return r.objective < -cfg.tol_dual && r.path;
        })) {
      // Nothing left in the pool: finish the pass on the same duals.
      std::vector<char> priced(passengers, 0);
      for (std::size_t p : pool) priced[p] = 1;
      std::vector<std::size_t> rest;
      for (std::size_t p = 0; p < passengers; ++p)
        if (!priced[p]) rest.push_back(p);
      std::vector<PricingResult> more =
          price_pool(g, solved.duals, rest, run.master.penalty(), cfg, oracle);
      for (PricingResult& r : more) results.push_back(std::move(r));
      pool = everyone;
      full = true;
    }
    IterationLog log;
    log.iteration = iteration;
    log.objective = objective;
    log.pool_size = pool.size();
    log.priced = results.size();
    log.full_pass = full;
    double beta = objective;
    for (PricingResult& r : results) {
      log.expanded += r.expanded;
      if (observer) observer(solved.duals, r);
      if (r.objective < -cfg.tol_dual && r.path) {
        run.master.add_path_column(*r.path);
        if (run.master.last_add_was_new()) ++log.columns_added;
        beta += r.objective;
      }
      run.pricing_log.push_back({iteration, std::move(r)});
    }
    // β is a valid bound only when every passenger was priced.
    if (full) lower_bound = std::max(lower_bound, beta);
    log.lower_bound = lower_bound;
    log.millis = elapsed_ms(iter_start);
    report.total_priced += log.priced;
    report.total_expanded += log.expanded;
    report.iterations.push_back(log);

    previous_improving = !full && log.columns_added > 0;
    objective_before_pass = objective;
    previous_full = full;
    previous_duals = solved.duals;
  }
  report.lower_bound = lower_bound;
  report.millis = elapsed_ms(start);
  return run;
}

namespace {

class BranchAndBound {
 public:
  BranchAndBound(const MasterProblem& master, const CgConfig& cfg)
      : master_(master), cfg_(cfg), lp_(master.program()), start_(Clock::now()) {
    integral_costs_ = true;
    for (const Column& c : master.columns())
      if (std::abs(c.cost - std::round(c.cost)) > 1e-9) integral_costs_ = false;
    // All-dummy assignment: always feasible.
    best_cost_ = 0.0;
    for (std::size_t p = 0; p < master.passenger_count(); ++p) {
      best_.push_back(p);
      best_cost_ += master.columns()[p].cost;
    }
  }

  void run() {
    const lp::Basis* warm = master_.last_solution() ? &master_.last_solution()->basis : nullptr;
    explore(warm);
  }

  const std::vector<std::size_t>& best() const { return best_; }
  double best_cost() const { return best_cost_; }
  bool complete() const { return complete_; }
  std::size_t nodes() const { return nodes_; }

 private:
  bool prunable(double bound) const {
    if (integral_costs_) return std::ceil(bound - 1e-6) >= best_cost_ - 1e-9;
    return bound >= best_cost_ - 1e-9;
  }

  void explore(const lp::Basis* warm) {
    if (nodes_ >= static_cast<std::size_t>(cfg_.node_limit) ||
        elapsed_ms(start_) > cfg_.time_limit_seconds * 1000.0) {
      complete_ = false;
      return;
    }
    ++nodes_;
    lp::LpSolution sol = lp::solve_lp(lp_, {}, warm);
    if (sol.status == lp::LpStatus::infeasible) return;
    if (sol.status != lp::LpStatus::optimal) {
      complete_ = false;
      return;
    }
    if (prunable(sol.objective)) return;

    int branch = -1;
    double most = 1e-6;
    for (int j = 0; j < lp_.column_count(); ++j) {
      double frac = std::min(sol.primal[j], 1.0 - sol.primal[j]);
      if (frac > most + 1e-12) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<std::size_t> chosen(master_.passenger_count(), 0);
      double cost = 0.0;
      for (int j = 0; j < lp_.column_count(); ++j)
        if (sol.primal[j] > 0.5) {
          chosen[master_.columns()[j].passenger] = static_cast<std::size_t>(j);
          cost += master_.columns()[j].cost;
        }
      if (cost < best_cost_ - 1e-9) {
        best_cost_ = cost;
        best_ = std::move(chosen);
      }
      return;
    }

    // Up branch: the passenger of `branch` must use it.
    const std::size_t passenger = master_.columns()[branch].passenger;
    std::vector<int> disabled;
    for (int j = 0; j < lp_.column_count(); ++j)
      if (j != branch && master_.columns()[j].passenger == passenger && lp_.enabled(j)) {
        lp_.set_enabled(j, false);
        disabled.push_back(j);
      }
    explore(&sol.basis);
    for (int j : disabled) lp_.set_enabled(j, true);

    // Down branch.
    lp_.set_enabled(branch, false);
    explore(&sol.basis);
    lp_.set_enabled(branch, true);
  }

  const MasterProblem& master_;
  const CgConfig& cfg_;
  lp::LinearProgram lp_;
  Clock::time_point start_;
  bool integral_costs_ = true;
  std::vector<std::size_t> best_;
  double best_cost_ = 0.0;
  bool complete_ = true;
  std::size_t nodes_ = 0;
};

}  // namespace

IntegerResult price_and_branch(const MasterProblem& master, const TimeExpandedGraph& g,
                               const Instance& inst, const CgConfig& cfg) {
  BranchAndBound bnb(master, cfg);
  bnb.run();
  IntegerResult out;
  out.chosen = bnb.best();
  out.search_complete = bnb.complete();
  out.nodes = bnb.nodes();
  out.bound = master.last_solution() ? master.last_solution()->objective : 0.0;
  Solution& sol = out.solution;
  for (std::size_t p = 0; p < out.chosen.size(); ++p) {
    const Column& c = master.columns()[out.chosen[p]];
    if (c.origin == ColumnOrigin::dummy) {
      SolutionPath unserved;
      unserved.passenger_id = inst.requests[p].passenger_id;
      unserved.cost = master.penalty();
      sol.paths.push_back(std::move(unserved));
    } else {
      sol.paths.push_back(reconstruct_solution_path(g, c.path, inst));
    }
    sol.total_cost += sol.paths.back().cost;
  }
  sol.bound = out.bound;
  sol.gap = relative_gap(sol.total_cost, sol.bound);
  out.gap = sol.gap;
  return out;
}

void write_report_json(const CgReport& report, std::ostream& out) {
  nlohmann::json j;
  j["status"] = to_string(report.status);
  j["objective"] = report.objective;
  j["lower_bound"] = report.lower_bound;
  j["total_priced"] = report.total_priced;
  j["total_expanded"] = report.total_expanded;
  j["iterations"] = nlohmann::json::array();
  for (const IterationLog& it : report.iterations) {
    j["iterations"].push_back({{"iteration", it.iteration},
                               {"objective", it.objective},
                               {"lower_bound", it.lower_bound},
                               {"pool_size", it.pool_size},
                               {"priced", it.priced},
                               {"columns_added", it.columns_added},
                               {"full_pass", it.full_pass},
                               {"expanded", it.expanded}});
  }
  out << j.dump(2) << '\n';
}

void write_iterations_csv(const CgReport& report, std::ostream& out) {
  out << "iteration,objective,lb,pool_size,priced,columns_added,millis\n";
  for (const IterationLog& it : report.iterations)
    out << it.iteration << ',' << it.objective << ',' << it.lower_bound << ',' << it.pool_size
        << ',' << it.priced << ',' << it.columns_added << ',' << it.millis << '\n';
}

}  // namespace sysopt
