#pragma once

// Suite configuration files. Line-oriented, UTF-8:
//
//   # comment
//   seeds = 1, 2, 3            top-level keys come before any section
//   cost_file = params.ini     optional; its [cost] table is loaded first
//
//   [cost]                     overrides for CostParams fields
//   base_iteration_ms = 11.71875
//
//   [calibration]              anchors for the `calibrate` verb
//   speedup_target = 11.2
//
//   [scenario fig6]            one table per scenario; list-valued keys sweep
//   discipline = fusion, concurrent
//   arrival = poisson:20, poisson:5000
//
// Unknown sections, unknown keys and repeated keys are errors.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tfsim/calibrate.hpp"
#include "tfsim/scenario.hpp"

namespace tfsim {

// A scenario table before sweep expansion: key -> one or more raw values.
struct ScenarioTable {
  std::string name;
  int line = 0;
  std::map<std::string, std::vector<std::string>> values;
};

struct SuiteConfig {
  std::vector<std::uint64_t> seeds{1};
  CostParams cost;
  CalibrationAnchors calibration;
  std::vector<ScenarioTable> scenarios;
};

namespace config_detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = s.find(sep, pos);
    out.emplace_back(trim(s.substr(pos, next == std::string_view::npos ? s.npos : next - pos)));
    if (next == std::string_view::npos) {
      break;
    }
    pos = next + 1;
  }
  return out;
}

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw Error(Errc::ConfigError, where + ": " + what);
}

inline double parse_double(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    fail(where, "expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& where) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
    fail(where, "expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline bool parse_bool(std::string_view s, const std::string& where) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  fail(where, "expected true/false, got '" + std::string(s) + "'");
}

inline Discipline parse_discipline(std::string_view s, const std::string& where) {
  if (s == "fusion") return Discipline::Fusion;
  if (s == "fusion_noshuffle") return Discipline::FusionNoShuffle;
  if (s == "dynamic_batching") return Discipline::DynamicBatching;
  if (s == "concurrent") return Discipline::ConcurrentInstances;
  fail(where, "unknown discipline '" + std::string(s) +
                  "' (fusion, fusion_noshuffle, dynamic_batching, concurrent)");
}

inline ArrivalSpec parse_arrival(std::string_view s, const std::string& where) {
  const auto parts = split(s, ':');
  if (parts.size() == 2 && parts[0] == "constant") {
    return ConstantArrival{parse_double(parts[1], where)};
  }
  if (parts.size() == 2 && parts[0] == "poisson") {
    return PoissonArrival{parse_double(parts[1], where)};
  }
  fail(where, "arrival must be constant:<ms> or poisson:<mean ms>, got '" + std::string(s) + "'");
}

inline LengthDistribution parse_lengths(std::string_view s, const std::string& where) {
  const auto parts = split(s, ':');
  if (parts.size() == 2 && parts[0] == "fixed") {
    return FixedLength{static_cast<Tokens>(parse_uint(parts[1], where))};
  }
  if (parts.size() == 3 && parts[0] == "uniform") {
    return UniformLength{static_cast<Tokens>(parse_uint(parts[1], where)),
                         static_cast<Tokens>(parse_uint(parts[2], where))};
  }
  fail(where, "lengths must be fixed:<n> or uniform:<lo>:<hi>, got '" + std::string(s) + "'");
}

inline Placement parse_placement(std::string_view s, const std::string& where) {
  if (s == "intra") return Placement::Intra;
  if (s == "inter") return Placement::Inter;
  fail(where, "placement must be intra or inter");
}

inline std::vector<std::uint64_t> parse_seeds(std::string_view s, const std::string& where) {
  std::vector<std::uint64_t> out;
  for (const auto& item : split(s, ',')) {
    out.push_back(parse_uint(item, where));
  }
  if (out.empty()) {
    fail(where, "seed list is empty");
  }
  return out;
}

inline void set_cost(CostParams& p, std::string_view key, std::string_view value,
                     const std::string& where) {
  const double v = parse_double(value, where);
  if (key == "base_iteration_ms") p.base_iteration_ms = v;
  else if (key == "marginal_per_request_ms") p.marginal_per_request_ms = v;
  else if (key == "capacity") p.capacity = static_cast<std::uint32_t>(parse_uint(value, where));
  else if (key == "preprocess_ms") p.preprocess_ms = v;
  else if (key == "alpha_intra") p.alpha_intra = v;
  else if (key == "alpha_inter") p.alpha_inter = v;
  else if (key == "beta_intra") p.beta_intra = v;
  else if (key == "beta_inter") p.beta_inter = v;
  else if (key == "memcpy_beta") p.memcpy_beta = v;
  else if (key == "contention_gamma") p.contention_gamma = v;
  else fail(where, "unknown key '" + std::string(key) + "' in [cost]");
}

inline void set_anchor(CalibrationAnchors& a, std::string_view key, std::string_view value,
                       const std::string& where) {
  if (key == "single_request_ms") a.single_request_ms = parse_double(value, where);
  else if (key == "tokens") a.tokens = static_cast<Tokens>(parse_uint(value, where));
  else if (key == "speedup_target") a.speedup_target = parse_double(value, where);
  else if (key == "arrival") a.arrival = parse_arrival(value, where);
  else if (key == "n_requests") a.n_requests = parse_uint(value, where);
  else if (key == "tolerance") a.tolerance = parse_double(value, where);
  else if (key == "gamma_max") a.gamma_max = parse_double(value, where);
  else fail(where, "unknown key '" + std::string(key) + "' in [calibration]");
}

inline constexpr std::string_view kSweepKeys[] = {
    "discipline", "n_requests", "arrival", "lengths", "max_output_length",
    "batch_size", "tp_size", "placement", "window_ms"};
inline constexpr std::string_view kScalarKeys[] = {
    "input_len", "bytes_per_sequence", "max_batch", "noshuffle_trim", "max_slots", "seeds"};

inline bool is_sweep_key(std::string_view k) {
  for (const auto s : kSweepKeys) {
    if (s == k) return true;
  }
  return false;
}

inline bool is_scalar_key(std::string_view k) {
  for (const auto s : kScalarKeys) {
    if (s == k) return true;
  }
  return false;
}

inline void write_cost_table(std::ostream& os, const CostParams& p) {
  os << "[cost]\n"
     << "base_iteration_ms = " << format_double(p.base_iteration_ms) << '\n'
     << "marginal_per_request_ms = " << format_double(p.marginal_per_request_ms) << '\n'
     << "capacity = " << p.capacity << '\n'
     << "preprocess_ms = " << format_double(p.preprocess_ms) << '\n'
     << "alpha_intra = " << format_double(p.alpha_intra) << '\n'
     << "alpha_inter = " << format_double(p.alpha_inter) << '\n'
     << "beta_intra = " << format_double(p.beta_intra) << '\n'
     << "beta_inter = " << format_double(p.beta_inter) << '\n'
     << "memcpy_beta = " << format_double(p.memcpy_beta) << '\n'
     << "contention_gamma = " << format_double(p.contention_gamma) << '\n';
}

}  // namespace config_detail

using config_detail::write_cost_table;

// Parses config text. `origin` names the source in diagnostics; `base_dir`
// resolves a relative cost_file.
inline SuiteConfig parse_config(std::string_view text, const std::string& origin = "<config>",
                                const std::filesystem::path& base_dir = {},
                                bool cost_only = false) {
  using namespace config_detail;
  SuiteConfig cfg;
  enum class Section { Top, Cost, Calibration, Scenario } section = Section::Top;
  std::map<std::string, int> seen_top, seen_cost, seen_calib;
  std::vector<std::pair<std::string, std::string>> cost_overrides;
  std::optional<std::string> cost_file;
  std::map<std::string, int> scenario_names;

  std::istringstream in{std::string(text)};
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        fail(where, "unterminated section header");
      }
      const auto header = trim(line.substr(1, line.size() - 2));
      if (header == "cost") {
        section = Section::Cost;
      } else if (cost_only) {
        fail(where, "parameter files may only contain a [cost] table");
      } else if (header == "calibration") {
        section = Section::Calibration;
      } else if (header.rfind("scenario", 0) == 0) {
        const auto name = std::string(trim(header.substr(8)));
        if (name.empty() || header.size() <= 8 || (header[8] != ' ' && header[8] != '\t')) {
          fail(where, "scenario tables need a name: [scenario <name>]");
        }
        if (scenario_names.contains(name)) {
          fail(where, "duplicate scenario '" + name + "'");
        }
        scenario_names[name] = lineno;
        cfg.scenarios.push_back({name, lineno, {}});
        section = Section::Scenario;
      } else {
        fail(where, "unknown section [" + std::string(header) + "]");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(where, "expected key = value");
    }
    const std::string key{trim(line.substr(0, eq))};
    const std::string value{trim(line.substr(eq + 1))};
    if (key.empty() || value.empty()) {
      fail(where, "empty key or value");
    }

    auto once = [&](std::map<std::string, int>& seen) {
      if (seen.contains(key)) {
        fail(where, "key '" + key + "' repeated (first at line " + std::to_string(seen[key]) + ")");
      }
      seen[key] = lineno;
    };

    switch (section) {
      case Section::Top:
        if (cost_only) fail(where, "parameter files may only contain a [cost] table");
        once(seen_top);
        if (key == "seeds") cfg.seeds = parse_seeds(value, where);
        else if (key == "cost_file") cost_file = value;
        else fail(where, "unknown top-level key '" + key + "'");
        break;
      case Section::Cost:
        once(seen_cost);
        set_cost(cfg.cost, key, value, where);  // validates key and value now
        cost_overrides.emplace_back(key, value);
        break;
      case Section::Calibration:
        once(seen_calib);
        set_anchor(cfg.calibration, key, value, where);
        break;
      case Section::Scenario: {
        auto& table = cfg.scenarios.back();
        if (table.values.contains(key)) {
          fail(where, "key '" + key + "' repeated in scenario '" + table.name + "'");
        }
        if (!is_sweep_key(key) && !is_scalar_key(key)) {
          fail(where, "unknown key '" + key + "' in scenario '" + table.name + "'");
        }
        auto items = is_sweep_key(key) ? split(value, ',') : std::vector<std::string>{value};
        for (const auto& item : items) {
          if (item.empty()) fail(where, "empty list item for '" + key + "'");
        }
        table.values[key] = std::move(items);
        break;
      }
    }
  }

  if (cost_file) {
    const auto path = base_dir / *cost_file;
    std::ifstream f(path);
    if (!f) {
      fail(origin, "cannot open cost_file '" + path.string() + "'");
    }
    std::stringstream buf;
    buf << f.rdbuf();
    CostParams p = parse_config(buf.str(), path.string(), path.parent_path(), true).cost;
    for (const auto& [k, v] : cost_overrides) {
      set_cost(p, k, v, origin);
    }
    cfg.cost = p;
  }
  cfg.calibration.seeds = cfg.seeds;
  try {
    validate(cfg.cost);
  } catch (const Error& e) {
    fail(origin, e.what());
  }
  return cfg;
}

inline SuiteConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) {
    throw Error(Errc::ConfigError, "cannot open config '" + path.string() + "'");
  }
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), path.string(), path.parent_path());
}

// One concrete scenario produced by sweep expansion.
struct Cell {
  std::string scenario;
  std::size_t index = 0;
  Scenario spec;
  std::vector<std::uint64_t> seeds;
};

// Cartesian product over list-valued keys, in the fixed key order of
// kSweepKeys (discipline varies slowest).
inline std::vector<Cell> expand(const SuiteConfig& cfg) {
  using namespace config_detail;
  std::vector<Cell> cells;
  for (const auto& table : cfg.scenarios) {
    const std::string where = "scenario '" + table.name + "' (line " + std::to_string(table.line) + ")";
    Scenario base;
    base.name = table.name;
    std::vector<std::uint64_t> seeds = cfg.seeds;
    for (const auto& [key, vals] : table.values) {
      const auto& v = vals.front();
      if (key == "input_len") base.input_len = static_cast<Tokens>(parse_uint(v, where));
      else if (key == "bytes_per_sequence") base.bytes_per_sequence = parse_uint(v, where);
      else if (key == "max_batch") base.batching.max_batch = parse_uint(v, where);
      else if (key == "noshuffle_trim") base.noshuffle_trim = parse_bool(v, where);
      else if (key == "max_slots") base.max_slots = parse_uint(v, where);
      else if (key == "seeds") seeds = parse_seeds(v, where);
    }
    std::sort(seeds.begin(), seeds.end());

    std::vector<Scenario> partial{base};
    for (const auto key : kSweepKeys) {
      const auto it = table.values.find(std::string(key));
      if (it == table.values.end()) {
        continue;
      }
      std::vector<Scenario> next;
      for (const auto& s : partial) {
        for (const auto& v : it->second) {
          Scenario c = s;
          if (key == "discipline") c.discipline = parse_discipline(v, where);
          else if (key == "n_requests") c.n_requests = parse_uint(v, where);
          else if (key == "arrival") c.arrival = parse_arrival(v, where);
          else if (key == "lengths") c.lengths = parse_lengths(v, where);
          else if (key == "max_output_length") c.max_output_length = static_cast<Tokens>(parse_uint(v, where));
          else if (key == "batch_size") c.batch_size = static_cast<std::uint32_t>(parse_uint(v, where));
          else if (key == "tp_size") c.tp.tp_size = static_cast<std::uint32_t>(parse_uint(v, where));
          else if (key == "placement") c.tp.placement = parse_placement(v, where);
          else if (key == "window_ms") c.batching.window_ms = parse_double(v, where);
          next.push_back(std::move(c));
        }
      }
      partial = std::move(next);
    }
    for (std::size_t i = 0; i < partial.size(); ++i) {
      validate(partial[i]);
      cells.push_back({table.name, i, std::move(partial[i]), seeds});
    }
  }
  return cells;
}

}  // namespace tfsim
