#pragma once

// Stream invariants checked over randomized scenarios. Shared by the unit
// suite and the acceptance binary, so it reports failures as strings rather
// than through a test framework.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tfsim/tfsim.hpp"

namespace tfsim::testing {

struct PropertyCase {
  Scenario scenario;
  std::uint64_t seed = 1;
};

inline PropertyCase random_case(Xoshiro256& rng, std::uint64_t seed) {
  Scenario s;
  s.name = "prop";
  s.n_requests = rng.next_in(1, 14);
  if (rng.next_in(0, 1) == 0) {
    s.arrival = PoissonArrival{static_cast<double>(rng.next_in(1, 300))};
  } else {
    s.arrival = ConstantArrival{static_cast<double>(rng.next_in(0, 200))};
  }
  const Tokens hi = static_cast<Tokens>(rng.next_in(1, 60));
  s.lengths = UniformLength{static_cast<Tokens>(rng.next_in(1, hi)), hi};
  s.max_output_length = hi + static_cast<Tokens>(rng.next_in(0, 5));
  s.batch_size = static_cast<std::uint32_t>(rng.next_in(1, 3));
  s.tp.tp_size = static_cast<std::uint32_t>(rng.next_in(1, 2));
  s.tp.placement = rng.next_in(0, 1) == 0 ? Placement::Intra : Placement::Inter;
  return {s, seed};
}

inline std::vector<PropertyCase> property_cases(std::size_t n, std::uint64_t seed = 20240601) {
  Xoshiro256 rng(seed);
  std::vector<PropertyCase> out;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(random_case(rng, i + 1));
  return out;
}

class Failures {
 public:
  explicit Failures(std::string context) : context_(std::move(context)) {}
  void require(bool ok, const std::string& what) {
    if (!ok) list_.push_back(context_ + ": " + what);
  }
  std::vector<std::string>& list() { return list_; }

 private:
  std::string context_;
  std::vector<std::string> list_;
};

inline std::multiset<RequestId> occupants_of(const BufferLayout& layout) {
  std::multiset<RequestId> out;
  for (const auto& s : layout.slots()) {
    if (!s.empty()) out.insert(*s.occupant);
  }
  return out;
}

// Replays run_fusion (shuffle on) one boundary at a time and checks:
// atomicity, immediate service, occupant conservation across the shuffle and
// layout contiguity after every boundary. Returns the replayed trace.
inline Trace checked_fusion_run(const Workload& w, const CostParams& p, const TPConfig& tp,
                                Failures& f) {
  StreamState state(w);
  state.trace.discipline = "fusion";
  state.now = w.requests.front().arrival_time;
  std::vector<bool> seen(w.requests.size(), false);
  Millis previous_boundary = -1.0;

  while (state.finished < w.requests.size()) {
    const Millis boundary = state.now;
    try_fuse_pending(state, w, p);
    for (const auto& [id, info] : state.active) {
      if (seen[id]) continue;
      seen[id] = true;
      const Millis ready = w.requests[id].arrival_time + p.preprocess_ms;
      f.require(ready <= boundary, "request fused before it was ready");
      f.require(ready > previous_boundary, "request skipped a boundary it was ready for");
    }
    f.require(state.layout.contiguous(), "layout not contiguous after fusion");
    f.require(state.layout.occupied_count() == state.active.size(), "slot/active mismatch");
    previous_boundary = boundary;
    if (state.active.empty()) {
      state.now = std::max(state.now, *next_ready_time(state, p));
      continue;
    }

    std::map<RequestId, Tokens> before;
    for (const auto& [id, info] : state.active) before[id] = info.current_iteration;
    const auto occupants_before = occupants_of(state.layout);
    const std::size_t first_new = state.trace.events.size();

    step_iteration(state, p, tp);

    std::multiset<RequestId> tokens, expected, survivors;
    for (std::size_t i = first_new; i < state.trace.events.size(); ++i) {
      const auto& e = state.trace.events[i];
      if (e.kind == EventKind::TokenGenerated) tokens.insert(*e.request);
    }
    for (const auto& [id, it] : before) expected.insert(id);
    f.require(tokens == expected, "iteration did not give every member exactly one token");
    for (const auto& [id, info] : state.active) {
      f.require(info.current_iteration == before[id] + 1, "token counter drifted");
      f.require(state.layout.slot_of(id) == info.memory_offset, "memory_offset out of sync");
      survivors.insert(id);
    }
    const auto occupants_after = occupants_of(state.layout);
    f.require(occupants_after == survivors, "occupants changed across the boundary");
    for (const auto id : occupants_after) {
      f.require(occupants_before.contains(id), "occupant appeared from nowhere");
    }
    f.require(state.layout.contiguous(), "layout not contiguous after the boundary");
  }
  state.trace.finalize();
  return std::move(state.trace);
}

inline std::string event_log(const Trace& t) {
  std::ostringstream os;
  write_event_log(os, t);
  return os.str();
}

inline void check_token_conservation(const Trace& t, const Workload& w, Failures& f) {
  std::vector<std::size_t> tokens(w.requests.size(), 0);
  for (const auto& e : t.events) {
    if (e.kind == EventKind::TokenGenerated) ++tokens[*e.request];
  }
  for (const auto& r : w.requests) {
    f.require(tokens[r.id] == r.output_tokens(), t.discipline + ": token count mismatch");
  }
}

// All invariants for one case. Shuffle dominance is checked at tp_size 2.
inline std::vector<std::string> check_case(const PropertyCase& c, const CostParams& p) {
  Failures f("seed " + std::to_string(c.seed));
  const auto w = make_workload(c.scenario, c.seed);
  const auto reference = run_fusion(w, p, c.scenario.tp);
  const auto replay = checked_fusion_run(w, p, c.scenario.tp, f);
  f.require(replay == reference, "replay diverged from run_fusion");
  check_token_conservation(reference, w, f);
  f.require(event_log(run_scenario(c.scenario, p, c.seed)) == event_log(reference),
            "trace not reproducible");

  check_token_conservation(run_concurrent_instances(w, p, c.scenario.tp), w, f);
  check_token_conservation(run_dynamic_batching(w, p, c.scenario.tp, BatchWindowConfig{100, 4}), w, f);

  const TPConfig tp2{2, c.scenario.tp.placement};
  const std::size_t n = w.requests.size();
  const Millis on = compute_metrics(run_fusion(w, p, tp2, {true, false, 0}), n).makespan;
  const Millis off = compute_metrics(run_fusion(w, p, tp2, {false, false, 0}), n).makespan;
  const Millis trimmed = compute_metrics(run_fusion(w, p, tp2, {false, true, 0}), n).makespan;
  f.require(on <= off, "shuffle on slower than shuffle off");
  f.require(trimmed <= off, "trimmed no-shuffle slower than untrimmed");
  return std::move(f.list());
}

inline std::size_t count_shuffles(const PropertyCase& c, const CostParams& p) {
  const auto t = run_scenario(c.scenario, p, c.seed);
  std::size_t n = 0;
  for (const auto& e : t.events) n += e.kind == EventKind::ShuffleExecuted ? 1 : 0;
  return n;
}

// CSV determinism over a small mixed-discipline suite.
inline bool suite_csv_reproducible() {
  const std::string text =
      "seeds = 2, 5\n"
      "[scenario mix]\n"
      "discipline = fusion, fusion_noshuffle, dynamic_batching, concurrent\n"
      "n_requests = 12\n"
      "arrival = poisson:40\n"
      "lengths = uniform:8:120\n"
      "max_output_length = 128\n"
      "tp_size = 1, 2\n";
  std::ostringstream a, b;
  run_suite(parse_config(text), a);
  run_suite(parse_config(text), b);
  return a.str() == b.str() && !a.str().empty();
}

}  // namespace tfsim::testing
