#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tfsim/trace.hpp"

namespace tfsim {

struct Metrics {
  Millis makespan = 0.0;
  std::vector<Millis> per_request_latency;  // Evicted - Arrived, by request id
  Millis mean_latency = 0.0;
  Millis p50_latency = 0.0;
  Millis p99_latency = 0.0;
  std::uint64_t total_stream_iterations = 0;
  double overlap_percent = 0.0;  // a ratio in [0, 1]
  Bytes bytes_shuffled = 0;
  std::uint64_t shuffle_count = 0;
};

// Nearest-rank percentile of an ascending-sorted sample.
inline double nearest_rank(const std::vector<double>& sorted, double pct) {
  if (sorted.empty()) {
    return 0.0;
  }
  const auto rank = static_cast<std::size_t>(std::ceil(pct / 100.0 * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

// Average number of requests simultaneously running, over the time at least
// one is running, divided by n. Intervals are [start, end).
inline double overlap_fraction(std::vector<std::pair<Millis, Millis>> intervals, std::size_t n) {
  if (intervals.empty() || n == 0) {
    return 0.0;
  }
  std::vector<std::pair<Millis, int>> edges;
  edges.reserve(intervals.size() * 2);
  for (const auto& [s, e] : intervals) {
    edges.emplace_back(s, +1);
    edges.emplace_back(e, -1);
  }
  // Ends before starts at equal times, so back-to-back runs do not overlap.
  std::sort(edges.begin(), edges.end());
  double weighted = 0.0;
  double busy = 0.0;
  int level = 0;
  Millis prev = edges.front().first;
  for (const auto& [t, delta] : edges) {
    if (level > 0) {
      weighted += level * (t - prev);
      busy += t - prev;
    }
    level += delta;
    prev = t;
  }
  if (busy <= 0.0) {
    // Zero-duration runs: count every request as running together.
    return static_cast<double>(intervals.size()) / static_cast<double>(n);
  }
  return weighted / busy / static_cast<double>(n);
}

inline Metrics compute_metrics(const Trace& trace, std::size_t n_requests) {
  std::vector<std::optional<Millis>> arrived(n_requests), fused(n_requests), evicted(n_requests);
  std::optional<Millis> first_token, last_token, first_arrival;
  Metrics m;

  auto slot = [&](const Event& e) -> std::size_t {
    check(e.request.has_value() && *e.request < n_requests, Errc::IncompleteTrace,
          "event references an unknown request");
    return *e.request;
  };

  for (const auto& e : trace.events) {
    switch (e.kind) {
      case EventKind::Arrived:
        arrived[slot(e)] = e.time;
        if (!first_arrival || e.time < *first_arrival) first_arrival = e.time;
        break;
      case EventKind::Fused:
        fused[slot(e)] = e.time;
        break;
      case EventKind::Evicted:
        evicted[slot(e)] = e.time;
        break;
      case EventKind::TokenGenerated:
        if (!first_token) first_token = e.time;
        last_token = e.time;
        break;
      case EventKind::ShuffleExecuted:
        ++m.shuffle_count;
        m.bytes_shuffled += static_cast<Bytes>(e.payload);
        break;
      default:
        break;
    }
  }

  check(n_requests > 0, Errc::IncompleteTrace, "no requests");
  Millis last_finish = -std::numeric_limits<Millis>::infinity();
  std::vector<std::pair<Millis, Millis>> running;
  running.reserve(n_requests);
  for (std::size_t i = 0; i < n_requests; ++i) {
    check(arrived[i] && fused[i] && evicted[i], Errc::IncompleteTrace,
          "request " + std::to_string(i) + " did not complete its lifecycle");
    m.per_request_latency.push_back(*evicted[i] - *arrived[i]);
    last_finish = std::max(last_finish, *evicted[i]);
    running.emplace_back(*fused[i], *evicted[i]);
  }
  m.makespan = last_finish - *first_arrival;

  std::vector<double> sorted = m.per_request_latency;
  std::sort(sorted.begin(), sorted.end());
  m.mean_latency = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n_requests);
  m.p50_latency = nearest_rank(sorted, 50.0);
  m.p99_latency = nearest_rank(sorted, 99.0);

  if (first_token) {
    for (const auto& e : trace.events) {
      if (e.kind == EventKind::IterationCompleted && e.time >= *first_token && e.time <= *last_token) {
        ++m.total_stream_iterations;
      }
    }
  }
  m.overlap_percent = overlap_fraction(std::move(running), n_requests);
  return m;
}

}  // namespace tfsim
