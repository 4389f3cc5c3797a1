#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <vector>

#include "tfsim/buffer_layout.hpp"
#include "tfsim/cost_model.hpp"
#include "tfsim/shuffle.hpp"
#include "tfsim/trace.hpp"
#include "tfsim/workload.hpp"

namespace tfsim {

struct FusionOptions {
  bool shuffle_enabled = true;
  // Without shuffling, orphans stay in the window until the stream drains.
  // Setting this trims empty slots off both window ends after every
  // iteration instead.
  bool trim_without_shuffle = false;
  std::size_t max_slots = 0;
};

// The single compute stream. Q_r holds requests not yet pre-processed, Q_f
// contexts that finished pre-processing and wait for the next iteration
// boundary.
struct StreamState {
  BufferLayout layout;
  std::map<RequestId, RuntimeInfo> active;
  Millis now = 0.0;
  std::uint64_t iteration_index = 0;
  std::deque<Context> ready_queue;
  std::deque<Request> request_queue;
  std::vector<Phase> phases;
  std::vector<Tokens> eos_at;
  std::size_t finished = 0;
  Trace trace;

  explicit StreamState(const Workload& w, std::size_t max_slots = 0) : layout(max_slots) {
    request_queue.assign(w.requests.begin(), w.requests.end());
    phases.assign(w.requests.size(), Phase::Received);
    eos_at.reserve(w.requests.size());
    for (const auto& r : w.requests) {
      eos_at.push_back(r.actual_output_length);
    }
  }

  void advance(RequestId id, Phase target) { phases[id] = advance_phase(phases[id], target); }
};

// Pre-processing runs on its own thread per request, so it overlaps freely
// with the stream and with other requests.
inline Context preprocess(const Request& request, const CostParams& params, Millis now) {
  return {request.id, now + params.preprocess_ms};
}

// Moves every request whose pre-processing has completed by state.now from
// Q_r to Q_f.
inline void receive_ready(StreamState& state, const CostParams& params) {
  while (!state.request_queue.empty()) {
    const Request& r = state.request_queue.front();
    const Context ctx = preprocess(r, params, r.arrival_time);
    if (ctx.ready_time > state.now) {
      break;
    }
    state.trace.emit(r.arrival_time, EventKind::Arrived, r.id);
    state.advance(r.id, Phase::Preprocessing);
    state.trace.emit(r.arrival_time, EventKind::PreprocessStart, r.id);
    state.advance(r.id, Phase::ReadyForFusion);
    state.trace.emit(ctx.ready_time, EventKind::PreprocessDone, r.id);
    state.ready_queue.push_back(ctx);
    state.request_queue.pop_front();
  }
}

// Earliest time a not-yet-fused request becomes ready.
inline std::optional<Millis> next_ready_time(const StreamState& state, const CostParams& params) {
  if (!state.ready_queue.empty()) {
    return state.ready_queue.front().ready_time;
  }
  if (!state.request_queue.empty()) {
    return state.request_queue.front().arrival_time + params.preprocess_ms;
  }
  return std::nullopt;
}

/// Fuses every ready context into the stream, in FIFO order. Only called at
/// an iteration boundary or while the stream is idle; a context that becomes
/// ready exactly at the boundary is included.
inline void try_fuse_pending(StreamState& state, const Workload& workload,
                             const CostParams& params) {
  receive_ready(state, params);
  while (!state.ready_queue.empty() && state.ready_queue.front().ready_time <= state.now) {
    const Context ctx = state.ready_queue.front();
    state.ready_queue.pop_front();
    const Request& r = workload.requests[ctx.request_id];
    const Bytes size = workload.tensor_size(r);
    const SlotIndex slot = state.layout.fuse_request(r.id, size);
    RuntimeInfo info;
    info.request_id = r.id;
    info.memory_offset = slot;
    info.tensor_size = size;
    info.max_output_length = r.max_output_length;
    info.current_iteration = 0;
    state.active.emplace(r.id, info);
    state.advance(r.id, Phase::Running);
    state.trace.emit(state.now, EventKind::Fused, r.id, static_cast<double>(slot));
  }
}

/// Runs one atomic iteration: every fused request gains one token, finished
/// requests leave the buffer, and the window is trimmed and (optionally)
/// shuffled before the next boundary.
inline void step_iteration(StreamState& state, const CostParams& params, const TPConfig& tp,
                           const FusionOptions& opts = {}) {
  check(!state.active.empty(), Errc::EmptyStream, "no request is running");
  BufferLayout& layout = state.layout;

  // Kernels and collectives run over the whole window, orphans included.
  const Millis duration = iteration_time(layout.buffer_size(), layout.live_bytes(), params, tp);
  state.now += duration;

  std::vector<RequestId> done;
  const auto& slots = layout.slots();
  for (SlotIndex i = layout.buffer_offset(); i < layout.buffer_offset() + layout.buffer_size(); ++i) {
    if (slots[i].empty()) {
      continue;
    }
    const RequestId id = *slots[i].occupant;
    auto& info = state.active.at(id);
    const TokenResult res = record_token(info, state.eos_at[id]);
    info = res.info;
    state.trace.emit(state.now, EventKind::TokenGenerated, id,
                     static_cast<double>(info.current_iteration));
    if (res.finished) {
      done.push_back(id);
    }
  }
  ++state.iteration_index;
  state.trace.emit(state.now, EventKind::IterationCompleted, std::nullopt, duration);

  for (const RequestId id : done) {
    layout.evict_request(id);
    const Tokens generated = state.active.at(id).current_iteration;
    state.active.erase(id);
    state.advance(id, Phase::Finished);
    ++state.finished;
    state.trace.emit(state.now, EventKind::Evicted, id, static_cast<double>(generated));
  }

  if (opts.shuffle_enabled || opts.trim_without_shuffle || layout.occupied_count() == 0) {
    layout.trim_boundaries();
  }
  if (opts.shuffle_enabled && layout.has_interior_holes()) {
    const ShufflePlan plan = plan_shuffle(layout);
    apply_shuffle(layout, plan);
    for (const auto& m : plan.moves) {
      state.active.at(m.request_id).memory_offset = m.dst;
    }
    state.now += shuffle_time(plan.total_bytes_moved, params);
    state.trace.emit(state.now, EventKind::ShuffleExecuted, std::nullopt,
                     static_cast<double>(plan.total_bytes_moved));
  }
}

/// Serves the whole workload on one stream and returns the time-ordered trace.
inline Trace run_fusion(const Workload& workload, const CostParams& params, const TPConfig& tp,
                        const FusionOptions& opts = {}) {
  validate(workload);
  validate(params);
  StreamState state(workload, opts.max_slots);
  state.trace.discipline = opts.shuffle_enabled ? "fusion" : "fusion_noshuffle";
  state.now = workload.requests.front().arrival_time;

  const std::size_t n = workload.requests.size();
  while (state.finished < n) {
    try_fuse_pending(state, workload, params);
    if (state.active.empty()) {
      // Idle stream: skip to the next request's ready time.
      const auto next = next_ready_time(state, params);
      check(next.has_value(), Errc::EmptyStream, "stream idle with no pending requests");
      state.now = std::max(state.now, *next);
      continue;
    }
    step_iteration(state, params, tp, opts);
  }
  state.trace.finalize();
  return std::move(state.trace);
}

}  // namespace tfsim
