// Command-line front end: run suites, calibrate, check the shuffle oracle,
// and dump single-scenario event logs.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>

#include "tfsim/tfsim.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2, kCalibrationFailed = 3 };

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) {
        throw tfsim::Error(tfsim::Errc::ConfigError, "cannot write '" + path + "'");
      }
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

int exit_code_for(const tfsim::Error& e) {
  switch (e.code()) {
    case tfsim::Errc::ConfigError: return kConfigError;
    case tfsim::Errc::CalibrationFailed: return kCalibrationFailed;
    default: return kRuntimeError;
  }
}

int cmd_run(const std::string& config, const std::string& out, const std::vector<std::uint64_t>& seeds,
            bool verbose) {
  auto cfg = tfsim::load_config(config);
  if (!seeds.empty()) {
    cfg.seeds = seeds;
  }
  const auto cells = tfsim::expand(cfg);  // surface config errors before writing
  Output o(out);
  const auto res = tfsim::run_suite(cfg, o.stream());
  if (verbose) {
    std::cerr << cells.size() << " cells, " << res.data_rows << " data rows, " << res.summary_rows
              << " summary rows, " << res.error_rows << " error rows\n";
  }
  return res.error_rows == 0 ? kOk : kRuntimeError;
}

int cmd_calibrate(const std::string& config, const std::string& out, bool verbose) {
  tfsim::SuiteConfig cfg;
  if (!config.empty()) {
    cfg = tfsim::load_config(config);
  }
  const auto result = tfsim::calibrate(cfg.calibration, cfg.cost);
  Output o(out);
  o.stream() << "# fitted: speedup " << tfsim::format_double(result.achieved_speedup) << " (target "
             << tfsim::format_double(cfg.calibration.speedup_target) << ")\n";
  tfsim::write_cost_table(o.stream(), result.params);
  if (verbose) {
    std::cerr << "contention_gamma = " << result.params.contention_gamma
              << ", achieved speedup = " << result.achieved_speedup << '\n';
  }
  return kOk;
}

// Exhaustive 0/1 arrays up to length 14 plus random weighted arrays.
int cmd_oracle(std::uint64_t seed, std::size_t random_cases, bool verbose) {
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  auto compare = [&](const std::vector<std::uint64_t>& arr) {
    const auto fast = tfsim::find_shuffled_region(arr);
    const auto slow = tfsim::brute_force_min_window(arr);
    ++checked;
    if (!(fast == slow)) {
      ++mismatches;
      if (verbose) {
        std::cerr << "mismatch on array of length " << arr.size() << '\n';
      }
    }
  };
  for (std::size_t len = 0; len <= 14; ++len) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << len); ++bits) {
      std::vector<std::uint64_t> arr(len);
      for (std::size_t i = 0; i < len; ++i) arr[i] = (bits >> i) & 1U;
      compare(arr);
    }
  }
  tfsim::Xoshiro256 rng(seed);
  for (std::size_t c = 0; c < random_cases; ++c) {
    std::vector<std::uint64_t> arr(rng.next_in(0, 64));
    for (auto& v : arr) v = rng.next_in(0, 1) ? rng.next_in(1, 100) : 0;
    compare(arr);
  }
  std::cout << "oracle: " << checked << " arrays checked, " << mismatches << " mismatches\n";
  return mismatches == 0 ? kOk : kRuntimeError;
}

int cmd_trace(const std::string& config, const std::string& scenario, std::size_t cell_index,
              std::uint64_t seed, const std::string& out, bool verbose) {
  const auto cfg = tfsim::load_config(config);
  const auto cells = tfsim::expand(cfg);
  const tfsim::Cell* chosen = nullptr;
  for (const auto& c : cells) {
    if ((scenario.empty() || c.scenario == scenario) && c.index == cell_index) {
      chosen = &c;
      break;
    }
  }
  if (!chosen) {
    throw tfsim::Error(tfsim::Errc::ConfigError, "no matching scenario cell");
  }
  const auto trace = tfsim::run_scenario(chosen->spec, cfg.cost, seed);
  Output o(out);
  tfsim::write_event_log(o.stream(), trace);
  if (verbose) {
    const auto m = tfsim::compute_metrics(trace, chosen->spec.n_requests);
    std::cerr << trace.discipline << ": makespan " << m.makespan << " ms, "
              << m.total_stream_iterations << " iterations, overlap " << m.overlap_percent << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal-fusion inference serving simulator"};
  app.require_subcommand(1);

  std::string config, out, scenario;
  std::vector<std::uint64_t> seeds;
  std::uint64_t seed = 1;
  std::size_t cell = 0;
  std::size_t random_cases = 1000;
  bool verbose = false;

  auto* run = app.add_subcommand("run", "Run every scenario in a config file and write CSV");
  run->add_option("--config", config, "Suite config file")->required();
  run->add_option("--out", out, "CSV output path (default stdout)");
  run->add_option("--seed", seeds, "Override the seed list");
  run->add_flag("--verbose", verbose);

  auto* cal = app.add_subcommand("calibrate", "Fit cost parameters and write a parameter file");
  cal->add_option("--config", config, "Config with [cost] and [calibration] tables");
  cal->add_option("--out", out, "Parameter file path (default stdout)");
  cal->add_flag("--verbose", verbose);

  auto* oracle = app.add_subcommand("oracle", "Check the shuffle-region search against brute force");
  oracle->add_option("--seed", seed, "Seed for the random weighted arrays");
  oracle->add_option("--cases", random_cases, "Number of random weighted arrays");
  oracle->add_flag("--verbose", verbose);

  auto* trace = app.add_subcommand("trace", "Run one scenario cell and write its event log");
  trace->add_option("--config", config, "Suite config file")->required();
  trace->add_option("--scenario", scenario, "Scenario name (default: first)");
  trace->add_option("--cell", cell, "Cell index within the scenario");
  trace->add_option("--seed", seed, "Seed");
  trace->add_option("--out", out, "Event log path (default stdout)");
  trace->add_flag("--verbose", verbose);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*run) return cmd_run(config, out, seeds, verbose);
    if (*cal) return cmd_calibrate(config, out, verbose);
    if (*oracle) return cmd_oracle(seed, random_cases, verbose);
    if (*trace) return cmd_trace(config, scenario, cell, seed, out, verbose);
  } catch (const tfsim::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
