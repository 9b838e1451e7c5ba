// Command-line front end: solve, generate, oracle, graph-dump.
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "sysopt/graph.hpp"
#include "sysopt/io.hpp"
#include "sysopt/oracle.hpp"
#include "sysopt/solver.hpp"

namespace fs = std::filesystem;
using namespace sysopt;

namespace {

enum Exit { kOk = 0, kInputError = 2, kLimitHit = 3, kInternalError = 4 };

struct InstanceArgs {
  std::string network;
  std::string demand;
  std::string params;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& a) {
  cmd->add_option("--network", a.network, "Network directory")->required();
  cmd->add_option("--demand", a.demand, "Demand CSV (default: <network>/demand.csv)");
  cmd->add_option("--params", a.params, "Params file (default: <network>/params.txt)");
}

Instance load(const InstanceArgs& a) {
  fs::path network = a.network;
  fs::path demand = a.demand.empty() ? network / "demand.csv" : fs::path(a.demand);
  fs::path params = a.params.empty() ? network / "params.txt" : fs::path(a.params);
  return load_instance(network, demand, params);
}

std::ofstream open_artifact(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_fractional_json(const CgRun& run, const TimeExpandedGraph& g, const Instance& inst,
                           std::ostream& out) {
  FractionalSolution frac = run.master.extract_solution();
  nlohmann::json j;
  j["objective"] = frac.objective;
  j["bound"] = run.report.lower_bound;
  j["passengers"] = nlohmann::json::array();
  for (const PassengerShare& share : frac.passengers) {
    nlohmann::json columns = nlohmann::json::array();
    for (const auto& [id, weight] : share.columns) {
      const Column& c = run.master.columns()[id];
      if (c.origin == ColumnOrigin::dummy) continue;
      SolutionPath path = reconstruct_solution_path(g, c.path, inst);
      nlohmann::json legs = nlohmann::json::array();
      for (const Leg& leg : path.legs) {
        nlohmann::json l;
        l["place"] = leg.kind == PlaceKey::Kind::stop
                         ? leg.stop_id
                         : (leg.kind == PlaceKey::Kind::origin ? "origin" : "destination");
        l["time"] = leg.time;
        if (!leg.route_id.empty()) l["route_id"] = leg.route_id;
        legs.push_back(l);
      }
      columns.push_back({{"weight", weight}, {"cost", c.cost}, {"legs", legs}});
    }
    j["passengers"].push_back({{"passenger_id", inst.requests[share.passenger].passenger_id},
                               {"unserved_weight", share.unserved_weight},
                               {"columns", columns}});
  }
  out << j.dump(2) << '\n';
}

struct SolveArgs {
  InstanceArgs instance;
  std::string filter = "on";
  std::string pricer = "astar";
  bool integer = false;
  std::string out = "out";
  unsigned seed = 0;
  int threads = 1;
  double time_limit = 3600.0;
  std::string cache;
};

int run_solve(const SolveArgs& a) {
  Instance inst = load(a.instance);
  CgConfig cfg;
  cfg.use_filter = a.filter == "on";
  cfg.pricer = a.pricer == "astar" ? PricerKind::astar : PricerKind::dijkstra;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.time_limit_seconds = a.time_limit;

  TimeExpandedGraph g = build_graph(inst);
  std::optional<ContractedGraph> contracted;
  std::optional<HeuristicOracle> oracle;
  if (cfg.pricer == PricerKind::astar) {
    contracted = build_contracted_graph(g, inst, a.cache);
    oracle.emplace(*contracted, g);
  }
  CgRun run = run_column_generation(g, inst, cfg, oracle ? &*oracle : nullptr);

  fs::create_directories(a.out);
  {
    auto out = open_artifact(fs::path(a.out) / "report.json");
    write_report_json(run.report, out);
  }
  {
    auto out = open_artifact(fs::path(a.out) / "iterations.csv");
    write_iterations_csv(run.report, out);
  }
  bool limit = run.report.status != CgStatus::optimal;
  std::ostringstream summary;
  summary << std::setprecision(12) << "status=" << to_string(run.report.status)
          << " lp=" << run.report.objective << " lb=" << run.report.lower_bound
          << " iterations=" << run.report.iterations.size()
          << " priced=" << run.report.total_priced;
  if (a.integer) {
    IntegerResult ir = price_and_branch(run.master, g, inst, cfg);
    auto out = open_artifact(fs::path(a.out) / "solution.json");
    write_solution_json(ir.solution, out);
    summary << " integer=" << ir.solution.total_cost << " gap=" << ir.gap
            << " nodes=" << ir.nodes;
    if (!ir.search_complete) {
      summary << " search=incomplete";
      limit = true;
    }
  } else {
    auto out = open_artifact(fs::path(a.out) / "solution.json");
    write_fractional_json(run, g, inst, out);
  }
  std::cout << summary.str() << '\n';
  return limit ? kLimitHit : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"System-optimal passenger assignment on scheduled intermodal networks"};
  app.require_subcommand(1);

  SolveArgs solve;
  CLI::App* solve_cmd = app.add_subcommand("solve", "Column generation, optionally price-and-branch");
  add_instance_options(solve_cmd, solve.instance);
  solve_cmd->add_option("--filter", solve.filter, "Pricing filter")
      ->check(CLI::IsMember({"on", "off"}));
  solve_cmd->add_option("--pricer", solve.pricer, "Pricing algorithm")
      ->check(CLI::IsMember({"astar", "dijkstra"}));
  solve_cmd->add_flag("--integer", solve.integer, "Run price-and-branch after column generation");
  solve_cmd->add_option("--out", solve.out, "Output directory");
  solve_cmd->add_option("--seed", solve.seed, "Random seed");
  solve_cmd->add_option("--threads", solve.threads, "Pricing worker threads")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--time-limit", solve.time_limit, "Wall-clock limit in seconds")
      ->check(CLI::PositiveNumber);
  solve_cmd->add_option("--cache", solve.cache, "Stop distance cache file");

  GeneratorSpec gen;
  std::string gen_network, gen_demand, gen_params, gen_out;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Sample sub-instances from a base instance");
  gen_cmd->add_option("--network", gen_network, "Base network directory")->required();
  gen_cmd->add_option("--demand", gen_demand, "Base demand CSV");
  gen_cmd->add_option("--params", gen_params, "Params file");
  gen_cmd->add_option("--fraction", gen.fraction, "Passenger fraction in (0,1]")->required();
  gen_cmd->add_option("--seed", gen.seed, "Base seed");
  gen_cmd->add_option("--count", gen.count, "Number of instances")->check(CLI::PositiveNumber);
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  InstanceArgs oracle_args;
  std::string mode = "arcflow";
  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Reference solvers");
  add_instance_options(oracle_cmd, oracle_args);
  oracle_cmd->add_option("--mode", mode, "arcflow (LP relaxation) or bruteforce (exact IP)")
      ->check(CLI::IsMember({"arcflow", "bruteforce"}));

  InstanceArgs dump_args;
  std::string dump_out;
  CLI::App* dump_cmd = app.add_subcommand("graph-dump", "Write the arc list as CSV");
  add_instance_options(dump_cmd, dump_args);
  dump_cmd->add_option("--out", dump_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*solve_cmd) return run_solve(solve);
    if (*gen_cmd) {
      gen.network_dir = gen_network;
      gen.demand_file = gen_demand.empty() ? fs::path(gen_network) / "demand.csv" : fs::path(gen_demand);
      gen.params_file = gen_params.empty() ? fs::path(gen_network) / "params.txt" : fs::path(gen_params);
      gen.out_dir = gen_out;
      for (const fs::path& dir : generate_instances(gen)) std::cout << dir.string() << '\n';
      return kOk;
    }
    if (*oracle_cmd) {
      Instance inst = load(oracle_args);
      TimeExpandedGraph g = build_graph(inst);
      double value = mode == "arcflow" ? solve_arcflow_lp(g, inst).objective
                                       : solve_bruteforce_ip(g, inst).cost;
      std::cout << std::setprecision(12) << value << '\n';
      return kOk;
    }
    if (*dump_cmd) {
      Instance inst = load(dump_args);
      TimeExpandedGraph g = build_graph(inst);
      if (dump_out.empty()) {
        write_arcs_csv(g, inst, std::cout);
      } else {
        auto out = open_artifact(dump_out);
        write_arcs_csv(g, inst, out);
      }
      return kOk;
    }
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const OracleRefused& e) {
    std::cerr << "oracle refused: " << e.what() << '\n';
    return kLimitHit;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return kOk;
}
