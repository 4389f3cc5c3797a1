#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tfsim/cost_model.hpp"
#include "tfsim/trace.hpp"
#include "tfsim/workload.hpp"

namespace tfsim {

struct BatchWindowConfig {
  Millis window_ms = 500.0;
  std::size_t max_batch = 32;
};

inline void validate(const BatchWindowConfig& cfg) {
  check(cfg.window_ms >= 0.0, Errc::ConfigError, "batching window must be >= 0");
  check(cfg.max_batch >= 1, Errc::ConfigError, "max_batch must be >= 1");
}

namespace detail {

inline void emit_request_prologue(Trace& trace, const Request& r, Millis ready) {
  trace.emit(r.arrival_time, EventKind::Arrived, r.id);
  trace.emit(r.arrival_time, EventKind::PreprocessStart, r.id);
  trace.emit(ready, EventKind::PreprocessDone, r.id);
}

struct Batch {
  std::vector<RequestId> members;
  Millis close = 0.0;  // when the batch stops accepting requests
};

// Windows are back-to-back intervals anchored at the first arrival. A batch
// closes at its window end, or as soon as it holds max_batch requests; the
// rest of that window then starts a fresh batch.
inline std::vector<Batch> form_batches(const Workload& w, const BatchWindowConfig& cfg) {
  std::vector<Batch> batches;
  const Millis anchor = w.requests.front().arrival_time;
  bool open = false;
  long long open_window = 0;
  Batch current;
  auto flush = [&] {
    if (open) {
      batches.push_back(std::move(current));
      current = Batch{};
      open = false;
    }
  };
  for (const auto& r : w.requests) {
    long long window = 0;
    Millis window_end = r.arrival_time;
    bool same = false;
    if (cfg.window_ms > 0.0) {
      window = static_cast<long long>(std::floor((r.arrival_time - anchor) / cfg.window_ms));
      window_end = anchor + static_cast<double>(window + 1) * cfg.window_ms;
      same = open && window == open_window;
    } else {
      // Zero-width windows only group simultaneous arrivals.
      same = open && current.close == r.arrival_time;
    }
    if (!same) {
      flush();
      open = true;
      open_window = window;
      current.close = window_end;
    }
    current.members.push_back(r.id);
    if (current.members.size() == cfg.max_batch) {
      current.close = std::min(current.close, r.arrival_time);
      flush();
    }
  }
  flush();
  return batches;
}

}  // namespace detail

/// Dynamic batching on one model instance. A batch dispatches once its window
/// closed, its members are pre-processed, and the previous batch finished; it
/// then runs until its longest member is done, every member riding each
/// iteration.
inline Trace run_dynamic_batching(const Workload& workload, const CostParams& params,
                                  const TPConfig& tp, const BatchWindowConfig& cfg) {
  validate(workload);
  validate(params);
  validate(cfg);
  Trace trace;
  trace.discipline = "dynamic_batching";
  for (const auto& r : workload.requests) {
    detail::emit_request_prologue(trace, r, r.arrival_time + params.preprocess_ms);
  }

  Millis free_at = 0.0;
  bool first = true;
  for (const auto& batch : detail::form_batches(workload, cfg)) {
    Millis dispatch = batch.close;
    Bytes bytes = 0;
    Tokens longest = 0;
    for (const RequestId id : batch.members) {
      const Request& r = workload.requests[id];
      dispatch = std::max(dispatch, r.arrival_time + params.preprocess_ms);
      bytes += workload.tensor_size(r);
      longest = std::max(longest, r.output_tokens());
    }
    if (!first) {
      dispatch = std::max(dispatch, free_at);
    }
    first = false;

    for (const RequestId id : batch.members) {
      trace.emit(dispatch, EventKind::Fused, id, static_cast<double>(batch.members.size()));
    }
    const Millis duration = iteration_time(batch.members.size(), bytes, params, tp);
    Millis now = dispatch;
    for (Tokens it = 1; it <= longest; ++it) {
      now += duration;
      for (const RequestId id : batch.members) {
        if (workload.requests[id].output_tokens() >= it) {
          trace.emit(now, EventKind::TokenGenerated, id, static_cast<double>(it));
        }
      }
      trace.emit(now, EventKind::IterationCompleted, std::nullopt, duration);
    }
    for (const RequestId id : batch.members) {
      trace.emit(now, EventKind::Evicted, id,
                 static_cast<double>(workload.requests[id].output_tokens()));
    }
    free_at = now;
  }
  trace.finalize();
  return trace;
}

/// One model instance per request, launched right after pre-processing. While
/// k instances run, each progresses at 1 / contention_factor(k) of its solo
/// speed; the rate is re-evaluated at every instance start and finish.
inline Trace run_concurrent_instances(const Workload& workload, const CostParams& params,
                                      const TPConfig& tp) {
  validate(workload);
  validate(params);
  Trace trace;
  trace.discipline = "concurrent_instances";

  struct Instance {
    RequestId id;
    Millis solo;       // uncontended iteration time
    Millis remaining;  // solo-time left in the current iteration
    Millis iter_start;
    Tokens done;
    Tokens total;
  };

  const std::size_t n = workload.requests.size();
  std::vector<Millis> ready(n);
  for (const auto& r : workload.requests) {
    ready[r.id] = r.arrival_time + params.preprocess_ms;
    detail::emit_request_prologue(trace, r, ready[r.id]);
  }

  std::vector<Instance> running;
  std::size_t next = 0;
  Millis now = ready.front();

  auto launch_ready = [&] {
    while (next < n && ready[next] <= now) {
      const Request& r = workload.requests[next];
      // Each instance carries its own tensors through its own communicator.
      const Millis solo = iteration_time(1, workload.tensor_size(r), params, tp);
      running.push_back({r.id, solo, solo, now, 0, r.output_tokens()});
      trace.emit(now, EventKind::Fused, r.id, 0.0);
      ++next;
    }
  };

  while (next < n || !running.empty()) {
    if (running.empty()) {
      now = std::max(now, ready[next]);
      launch_ready();
      continue;
    }
    const double factor = contention_factor(running.size(), params);
    Millis min_remaining = std::numeric_limits<Millis>::infinity();
    for (const auto& inst : running) {
      min_remaining = std::min(min_remaining, inst.remaining);
    }
    const Millis finish_at = now + min_remaining * factor;
    const Millis start_at = next < n ? ready[next] : std::numeric_limits<Millis>::infinity();

    if (start_at < finish_at) {
      const Millis progress = (start_at - now) / factor;
      for (auto& inst : running) {
        inst.remaining = std::max(0.0, inst.remaining - progress);
      }
      now = start_at;
      launch_ready();
      continue;
    }

    now = finish_at;
    std::vector<Instance> still_running;
    still_running.reserve(running.size());
    for (auto& inst : running) {
      if (inst.remaining > min_remaining) {
        inst.remaining -= min_remaining;
        still_running.push_back(inst);
        continue;
      }
      ++inst.done;
      trace.emit(now, EventKind::TokenGenerated, inst.id, static_cast<double>(inst.done));
      trace.emit(now, EventKind::IterationCompleted, inst.id, now - inst.iter_start);
      if (inst.done == inst.total) {
        trace.emit(now, EventKind::Evicted, inst.id, static_cast<double>(inst.done));
        continue;
      }
      inst.remaining = inst.solo;
      inst.iter_start = now;
      still_running.push_back(inst);
    }
    running = std::move(still_running);
    launch_ready();
  }
  trace.finalize();
  return trace;
}

}  // namespace tfsim
