#include "sysopt/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace sysopt {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

struct CsvRow {
  std::size_t line = 0;
  std::vector<std::string> cells;
};

/// Reads a headed CSV file, returning rows reordered to the `columns` order.
class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::vector<std::string>& columns) : path_(path) {
    std::ifstream in(path);
    if (!in) throw InputError(path.string() + ": cannot open file");
    std::string line;
    std::size_t lineno = 0;
    std::vector<int> order;
    while (std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      auto cells = split(line, ',');
      if (order.empty()) {
        for (const std::string& c : columns) {
          auto it = std::find(cells.begin(), cells.end(), c);
          if (it == cells.end()) throw error(lineno, "missing column '" + c + "'");
          order.push_back(static_cast<int>(it - cells.begin()));
        }
        continue;
      }
      CsvRow row{lineno, {}};
      for (int idx : order) {
        if (idx >= static_cast<int>(cells.size())) throw error(lineno, "too few fields");
        row.cells.push_back(cells[idx]);
      }
      rows_.push_back(std::move(row));
    }
    if (order.empty()) throw InputError(path.string() + ": missing header");
  }

  const std::vector<CsvRow>& rows() const { return rows_; }

  InputError error(std::size_t line, const std::string& what) const {
    return InputError(path_.string() + ":" + std::to_string(line) + ": " + what);
  }

  double number(const CsvRow& row, std::size_t col) const {
    const std::string& s = row.cells[col];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw error(row.line, "not a number: '" + s + "'");
    return v;
  }

  long long integer(const CsvRow& row, std::size_t col) const {
    const std::string& s = row.cells[col];
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw error(row.line, "not an integer: '" + s + "'");
    return v;
  }

  Time time(const CsvRow& row, std::size_t col) const {
    try {
      return parse_time(row.cells[col]);
    } catch (const InputError& e) {
      throw error(row.line, e.what());
    }
  }

 private:
  fs::path path_;
  std::vector<CsvRow> rows_;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

PlaceKey parse_place(const std::string& text) {
  if (text.rfind("origin:", 0) == 0) return {PlaceKey::Kind::origin, text.substr(7)};
  if (text.rfind("destination:", 0) == 0) return {PlaceKey::Kind::destination, text.substr(12)};
  return {PlaceKey::Kind::stop, text};
}

std::string format_place(const PlaceKey& key) {
  switch (key.kind) {
    case PlaceKey::Kind::origin: return "origin:" + key.id;
    case PlaceKey::Kind::destination: return "destination:" + key.id;
    case PlaceKey::Kind::stop: return key.id;
  }
  return key.id;
}

const char* metric_name(DistanceMetric m) {
  switch (m) {
    case DistanceMetric::euclidean: return "euclidean";
    case DistanceMetric::manhattan: return "manhattan";
    case DistanceMetric::matrix: return "matrix";
  }
  return "euclidean";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError(path.string() + ": cannot write file");
  return out;
}

}  // namespace

Time parse_time(const std::string& raw) {
  std::string text = trim(raw);
  if (text.empty()) throw InputError("empty time value");
  if (text.find(':') == std::string::npos) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw InputError("not a time: '" + text + "'");
    return v;
  }
  auto parts = split(text, ':');
  if (parts.size() < 2 || parts.size() > 3) throw InputError("not a clock time: '" + text + "'");
  Time total = 0;
  const Time scale[3] = {3600, 60, 1};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
    if (ec != std::errc() || ptr != parts[i].data() + parts[i].size() || v < 0)
      throw InputError("not a clock time: '" + text + "'");
    total += v * scale[i];
  }
  return total;
}

Parameters load_params(const fs::path& params_file) {
  std::ifstream in(params_file);
  if (!in) throw InputError(params_file.string() + ": cannot open file");
  std::map<std::string, std::pair<std::string, std::size_t>> values;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](std::size_t ln, const std::string& what) {
    return InputError(params_file.string() + ":" + std::to_string(ln) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw fail(lineno, "expected key=value");
    values[trim(line.substr(0, eq))] = {trim(line.substr(eq + 1)), lineno};
  }
  static const std::set<std::string> known = {"xi",      "delta_a", "delta_e", "delta_w",
                                              "upsilon", "t_max",   "rho",     "metric"};
  for (const auto& [key, v] : values)
    if (!known.contains(key)) throw fail(v.second, "unknown key '" + key + "'");
  auto number = [&](const std::string& key) -> double {
    auto it = values.find(key);
    if (it == values.end())
      throw InputError(params_file.string() + ": missing key '" + key + "'");
    const std::string& s = it->second.first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
      throw fail(it->second.second, "not a number: '" + s + "'");
    return v;
  };
  auto timestep = [&](const std::string& key) -> Time {
    auto it = values.find(key);
    if (it == values.end())
      throw InputError(params_file.string() + ": missing key '" + key + "'");
    try {
      return parse_time(it->second.first);
    } catch (const InputError& e) {
      throw fail(it->second.second, e.what());
    }
  };

  Parameters p;
  p.walk_speed = number("xi");
  p.max_access = number("delta_a");
  p.max_egress = number("delta_e");
  p.max_walk = number("delta_w");
  p.max_wait = timestep("upsilon");
  p.max_travel = timestep("t_max");
  p.penalty = values.contains("rho") ? number("rho") : default_penalty(p.max_travel);
  if (auto it = values.find("metric"); it != values.end()) {
    const std::string& m = it->second.first;
    if (m == "euclidean")
      p.metric = DistanceMetric::euclidean;
    else if (m == "manhattan")
      p.metric = DistanceMetric::manhattan;
    else if (m == "matrix")
      p.metric = DistanceMetric::matrix;
    else
      throw fail(it->second.second, "unknown metric '" + m + "'");
  }
  return p;
}

Instance load_instance(const fs::path& network_dir, const fs::path& demand_file,
                       const fs::path& params_file) {
  Instance inst;
  inst.params = load_params(params_file);

  CsvFile stops(network_dir / "stops.csv", {"stop_id", "x", "y"});
  for (const CsvRow& r : stops.rows())
    inst.stops.push_back({r.cells[0], {stops.number(r, 1), stops.number(r, 2)}});

  CsvFile routes(network_dir / "routes.csv", {"route_id", "capacity"});
  std::map<std::string, std::size_t> route_pos;
  for (const CsvRow& r : routes.rows()) {
    if (route_pos.contains(r.cells[0])) throw routes.error(r.line, "duplicate route " + r.cells[0]);
    route_pos[r.cells[0]] = inst.routes.size();
    inst.routes.push_back({r.cells[0], {}, static_cast<int>(routes.integer(r, 1))});
  }

  CsvFile times(network_dir / "stop_times.csv", {"route_id", "stop_id", "arrival_time", "seq"});
  std::vector<std::map<long long, Visit>> visits(inst.routes.size());
  for (const CsvRow& r : times.rows()) {
    auto it = route_pos.find(r.cells[0]);
    if (it == route_pos.end()) throw times.error(r.line, "unknown route " + r.cells[0]);
    long long seq = times.integer(r, 3);
    if (!visits[it->second].emplace(seq, Visit{r.cells[1], times.time(r, 2)}).second)
      throw times.error(r.line, "duplicate seq for route " + r.cells[0]);
  }
  for (std::size_t k = 0; k < inst.routes.size(); ++k)
    for (auto& [seq, v] : visits[k]) inst.routes[k].visits.push_back(v);

  CsvFile demand(demand_file, {"passenger_id", "ox", "oy", "dx", "dy", "depart"});
  for (const CsvRow& r : demand.rows()) {
    Request q{r.cells[0],
              {demand.number(r, 1), demand.number(r, 2)},
              {demand.number(r, 3), demand.number(r, 4)},
              demand.time(r, 5)};
    if (q.depart < 0) throw demand.error(r.line, "negative depart time");
    inst.requests.push_back(std::move(q));
  }

  if (fs::exists(network_dir / "distances.csv")) {
    CsvFile dist(network_dir / "distances.csv", {"from", "to", "distance"});
    DistanceTable table;
    for (const CsvRow& r : dist.rows())
      table.set(parse_place(r.cells[0]), parse_place(r.cells[1]), dist.number(r, 2));
    inst.distances = std::move(table);
  }

  auto violations = validate_instance(inst);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const Violation& v : violations) msg += "\n  " + v.code + ": " + v.detail;
    throw InputError(msg);
  }
  return inst;
}

void write_network(const Instance& inst, const fs::path& network_dir) {
  fs::create_directories(network_dir);
  {
    auto out = open_out(network_dir / "stops.csv");
    out << "stop_id,x,y\n";
    for (const Stop& s : inst.stops)
      out << s.stop_id << ',' << format_number(s.location.x) << ','
          << format_number(s.location.y) << '\n';
  }
  {
    auto out = open_out(network_dir / "routes.csv");
    out << "route_id,capacity\n";
    for (const RouteSchedule& r : inst.routes) out << r.route_id << ',' << r.capacity << '\n';
  }
  {
    auto out = open_out(network_dir / "stop_times.csv");
    out << "route_id,stop_id,arrival_time,seq\n";
    for (const RouteSchedule& r : inst.routes)
      for (std::size_t k = 0; k < r.visits.size(); ++k)
        out << r.route_id << ',' << r.visits[k].stop_id << ',' << r.visits[k].arrival << ','
            << k + 1 << '\n';
  }
  if (inst.distances) {
    auto out = open_out(network_dir / "distances.csv");
    out << "from,to,distance\n";
    for (const auto& [key, d] : inst.distances->entries())
      out << format_place(key.first) << ',' << format_place(key.second) << ','
          << format_number(d) << '\n';
  }
}

void write_demand(const Instance& inst, const fs::path& demand_file) {
  auto out = open_out(demand_file);
  out << "passenger_id,ox,oy,dx,dy,depart\n";
  for (const Request& q : inst.requests)
    out << q.passenger_id << ',' << format_number(q.origin.x) << ',' << format_number(q.origin.y)
        << ',' << format_number(q.destination.x) << ',' << format_number(q.destination.y) << ','
        << q.depart << '\n';
}

void write_params(const Parameters& p, const fs::path& params_file) {
  auto out = open_out(params_file);
  out << "xi=" << format_number(p.walk_speed) << '\n'
      << "delta_a=" << format_number(p.max_access) << '\n'
      << "delta_e=" << format_number(p.max_egress) << '\n'
      << "delta_w=" << format_number(p.max_walk) << '\n'
      << "upsilon=" << p.max_wait << '\n'
      << "t_max=" << p.max_travel << '\n'
      << "rho=" << format_number(p.penalty) << '\n'
      << "metric=" << metric_name(p.metric) << '\n';
}

void write_instance(const Instance& inst, const fs::path& dir) {
  write_network(inst, dir);
  write_demand(inst, dir / "demand.csv");
  write_params(inst.params, dir / "params.txt");
}

Instance sample_instance(const Instance& base, double fraction, unsigned long long seed) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("fraction must lie in (0, 1]");
  const std::size_t n = base.requests.size();
  const auto k = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (k == 0) throw std::invalid_argument("fraction selects no passengers");

  // Partial Fisher-Yates with raw engine output keeps samples identical across platforms.
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng() % (n - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<std::size_t> chosen(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());

  Instance out = base;
  out.requests.clear();
  std::set<std::string> kept;
  for (std::size_t i : chosen) {
    out.requests.push_back(base.requests[i]);
    kept.insert(base.requests[i].passenger_id);
  }
  for (RouteSchedule& r : out.routes)
    r.capacity = std::max(1, static_cast<int>(std::ceil(fraction * r.capacity - 1e-9)));
  if (base.distances) {
    DistanceTable table;
    auto keep = [&](const PlaceKey& key) {
      return key.kind == PlaceKey::Kind::stop || kept.contains(key.id);
    };
    for (const auto& [key, d] : base.distances->entries())
      if (keep(key.first) && keep(key.second)) table.set(key.first, key.second, d);
    out.distances = std::move(table);
  }
  return out;
}

std::vector<fs::path> generate_instances(const GeneratorSpec& spec) {
  Instance base = load_instance(spec.network_dir, spec.demand_file, spec.params_file);
  std::vector<fs::path> dirs;
  for (int i = 0; i < spec.count; ++i) {
    Instance inst = sample_instance(base, spec.fraction, spec.seed + static_cast<unsigned>(i));
    fs::path dir = spec.out_dir / ("instance_" + std::to_string(i));
    write_instance(inst, dir);
    dirs.push_back(dir);
  }
  return dirs;
}

void write_solution_json(const Solution& sol, std::ostream& out) {
  nlohmann::json j;
  j["total_cost"] = sol.total_cost;
  j["bound"] = sol.bound;
  j["gap"] = sol.gap;
  j["paths"] = nlohmann::json::array();
  for (const SolutionPath& p : sol.paths) {
    nlohmann::json legs = nlohmann::json::array();
    for (const Leg& leg : p.legs) {
      nlohmann::json l;
      switch (leg.kind) {
        case PlaceKey::Kind::origin: l["place"] = "origin"; break;
        case PlaceKey::Kind::destination: l["place"] = "destination"; break;
        case PlaceKey::Kind::stop: l["place"] = leg.stop_id; break;
      }
      l["time"] = leg.time;
      if (!leg.route_id.empty()) l["route_id"] = leg.route_id;
      legs.push_back(std::move(l));
    }
    j["paths"].push_back(
        {{"passenger_id", p.passenger_id}, {"served", p.served}, {"cost", p.cost}, {"legs", legs}});
  }
  out << j.dump(2) << '\n';
}

}  // namespace sysopt
