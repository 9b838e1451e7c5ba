// File formats.
//
// Network directory:
//   stops.csv       stop_id,x,y
//   routes.csv      route_id,capacity
//   stop_times.csv  route_id,stop_id,arrival_time,seq
//   distances.csv   from,to,distance   (optional; read when metric=matrix)
// Demand file:      passenger_id,ox,oy,dx,dy,depart
// Params file:      key=value lines (xi, delta_a, delta_e, delta_w, upsilon,
//                   t_max, rho, metric); `#` starts a comment.
//
// Times are integer timesteps or HH:MM[:SS] clock times (converted to seconds).
// In distances.csv an endpoint is a stop id, `origin:<passenger_id>` or
// `destination:<passenger_id>`; entries are symmetric.
#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sysopt/model.hpp"

namespace sysopt {

/// Parse or validation failure; `what()` carries file and line.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a timestep: an integer, or HH:MM[:SS] in seconds.
Time parse_time(const std::string& text);

Parameters load_params(const std::filesystem::path& params_file);

/// Loads and validates an instance; throws InputError on parse errors or violations.
Instance load_instance(const std::filesystem::path& network_dir,
                       const std::filesystem::path& demand_file,
                       const std::filesystem::path& params_file);

/// Writes stops.csv, routes.csv, stop_times.csv and (if present) distances.csv.
void write_network(const Instance& inst, const std::filesystem::path& network_dir);
void write_demand(const Instance& inst, const std::filesystem::path& demand_file);
void write_params(const Parameters& params, const std::filesystem::path& params_file);

/// Writes a self-contained instance directory: network files, demand.csv and params.txt.
void write_instance(const Instance& inst, const std::filesystem::path& dir);

struct GeneratorSpec {
  std::filesystem::path network_dir;
  std::filesystem::path demand_file;
  std::filesystem::path params_file;
  double fraction = 1.0;
  unsigned long long seed = 0;
  int count = 1;
  std::filesystem::path out_dir;
};

/// Samples passenger subsets of size round(f * |P|) and scales vehicle capacities to
/// ceil(f * capacity), at least 1. Output is deterministic in (seed, index).
std::vector<std::filesystem::path> generate_instances(const GeneratorSpec& spec);

/// Instance with a sampled subset of requests and scaled capacities.
Instance sample_instance(const Instance& base, double fraction, unsigned long long seed);

/// Solution JSON (keys sorted): per-passenger legs, cost and served flag; totals, bound, gap.
void write_solution_json(const Solution& sol, std::ostream& out);

}  // namespace sysopt
