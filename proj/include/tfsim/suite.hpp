#pragma once

#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "tfsim/config.hpp"
#include "tfsim/metrics.hpp"

namespace tfsim {

// Column order is part of the output format; see README.
inline constexpr std::string_view kCsvIdColumns[] = {
    "row_type", "scenario", "cell", "discipline", "n_requests", "arrival", "lengths",
    "max_output_length", "batch_size", "tp_size", "placement", "window_ms", "seed"};
inline constexpr std::string_view kCsvMetricColumns[] = {
    "makespan_ms", "mean_latency_ms", "p50_latency_ms", "p99_latency_ms",
    "total_stream_iterations", "overlap_percent", "bytes_shuffled", "shuffle_count",
    "speedup_vs_fusion"};
inline constexpr std::size_t kMetricCount = std::size(kCsvMetricColumns);

struct RowMetrics {
  std::array<double, kMetricCount> values{};
};

inline RowMetrics to_row(const Metrics& m, double speedup) {
  return {{m.makespan, m.mean_latency, m.p50_latency, m.p99_latency,
           static_cast<double>(m.total_stream_iterations), m.overlap_percent,
           static_cast<double>(m.bytes_shuffled), static_cast<double>(m.shuffle_count), speedup}};
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) {
    return field;
  }
  std::string out = "\"";
  for (const char c : field) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

inline void write_csv_header(std::ostream& os) {
  bool first = true;
  for (const auto c : kCsvIdColumns) {
    os << (first ? "" : ",") << c;
    first = false;
  }
  for (const auto c : kCsvMetricColumns) os << ',' << c;
  for (const auto c : kCsvMetricColumns) os << ',' << c << "_std";
  os << ",error\n";
}

struct SuiteOutcome {
  std::size_t data_rows = 0;
  std::size_t summary_rows = 0;
  std::size_t error_rows = 0;
};

namespace suite_detail {

inline void write_ids(std::ostream& os, std::string_view row_type, const Cell& cell,
                      const std::string& seed) {
  const Scenario& s = cell.spec;
  os << row_type << ',' << csv_escape(cell.scenario) << ',' << cell.index << ','
     << to_string(s.discipline) << ',' << s.n_requests << ',' << describe(s.arrival) << ','
     << describe(s.lengths) << ',' << s.max_output_length << ',' << s.batch_size << ','
     << s.tp.tp_size << ',' << to_string(s.tp.placement) << ','
     << format_double(s.batching.window_ms) << ',' << seed;
}

inline void write_values(std::ostream& os, const std::array<double, kMetricCount>* values) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    os << ',';
    if (values) os << format_double((*values)[i]);
  }
}

}  // namespace suite_detail

// Runs one (cell, seed). Speedup is this discipline's makespan over fusion's
// on the same workload.
inline RowMetrics run_cell(const Cell& cell, const CostParams& params, std::uint64_t seed) {
  const Workload w = make_workload(cell.spec, seed);
  const std::size_t n = w.requests.size();
  const Metrics m = compute_metrics(run_workload(w, cell.spec.discipline, cell.spec, params), n);
  double speedup = 1.0;
  if (cell.spec.discipline != Discipline::Fusion) {
    const Metrics f = compute_metrics(run_workload(w, Discipline::Fusion, cell.spec, params), n);
    speedup = m.makespan / f.makespan;
  }
  return to_row(m, speedup);
}

/// Writes the header, one data row per (cell, seed) and one summary row
/// (mean and sample standard deviation) per cell. Failures become error rows.
inline SuiteOutcome run_suite(const SuiteConfig& cfg, std::ostream& os) {
  using namespace suite_detail;
  const std::vector<Cell> cells = expand(cfg);
  SuiteOutcome out;
  write_csv_header(os);
  for (const auto& cell : cells) {
    std::vector<RowMetrics> rows;
    for (const auto seed : cell.seeds) {
      try {
        const RowMetrics r = run_cell(cell, cfg.cost, seed);
        write_ids(os, "data", cell, std::to_string(seed));
        write_values(os, &r.values);
        write_values(os, nullptr);
        os << ",\n";
        rows.push_back(r);
        ++out.data_rows;
      } catch (const std::exception& e) {
        write_ids(os, "error", cell, std::to_string(seed));
        write_values(os, nullptr);
        write_values(os, nullptr);
        os << ',' << csv_escape(e.what()) << '\n';
        ++out.error_rows;
      }
    }
    if (rows.empty()) {
      continue;
    }
    std::array<double, kMetricCount> mean{}, sd{};
    for (std::size_t i = 0; i < kMetricCount; ++i) {
      double sum = 0.0;
      for (const auto& r : rows) sum += r.values[i];
      mean[i] = sum / static_cast<double>(rows.size());
      double sq = 0.0;
      for (const auto& r : rows) sq += (r.values[i] - mean[i]) * (r.values[i] - mean[i]);
      sd[i] = rows.size() > 1 ? std::sqrt(sq / static_cast<double>(rows.size() - 1)) : 0.0;
    }
    write_ids(os, "summary", cell, "");
    write_values(os, &mean);
    write_values(os, &sd);
    os << ",\n";
    ++out.summary_rows;
  }
  return out;
}

}  // namespace tfsim
