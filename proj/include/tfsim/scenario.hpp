#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "tfsim/arrivals.hpp"
#include "tfsim/baselines.hpp"
#include "tfsim/fusion_engine.hpp"

namespace tfsim {

enum class Discipline : std::uint8_t { Fusion, FusionNoShuffle, DynamicBatching, ConcurrentInstances };

constexpr std::string_view to_string(Discipline d) {
  switch (d) {
    case Discipline::Fusion: return "fusion";
    case Discipline::FusionNoShuffle: return "fusion_noshuffle";
    case Discipline::DynamicBatching: return "dynamic_batching";
    case Discipline::ConcurrentInstances: return "concurrent";
  }
  return "?";
}

struct ConstantArrival {
  Millis interval = 0.0;
};
struct PoissonArrival {
  Millis mean_interval = 1.0;
};
using ArrivalSpec = std::variant<ConstantArrival, PoissonArrival>;

inline std::string describe(const ArrivalSpec& a) {
  if (const auto* c = std::get_if<ConstantArrival>(&a)) {
    return "constant:" + format_double(c->interval);
  }
  return "poisson:" + format_double(std::get<PoissonArrival>(a).mean_interval);
}

inline std::string describe(const LengthDistribution& d) {
  if (const auto* f = std::get_if<FixedLength>(&d)) {
    return "fixed:" + std::to_string(f->length);
  }
  const auto& u = std::get<UniformLength>(d);
  return "uniform:" + std::to_string(u.lo) + ":" + std::to_string(u.hi);
}

struct Scenario {
  std::string name = "scenario";
  Discipline discipline = Discipline::Fusion;
  std::size_t n_requests = 1;
  ArrivalSpec arrival = ConstantArrival{0.0};
  LengthDistribution lengths = FixedLength{512};
  Tokens max_output_length = 512;
  std::uint32_t batch_size = 1;
  Tokens input_len = 32;
  Bytes bytes_per_sequence = Bytes{1} << 20;
  TPConfig tp;
  BatchWindowConfig batching;
  bool noshuffle_trim = false;
  std::size_t max_slots = 0;
  Millis start_ms = 0.0;
};

// Checks everything a run would reject, reported as configuration errors.
inline void validate(const Scenario& s) {
  auto require = [&](bool ok, const std::string& what) {
    check(ok, Errc::ConfigError, s.name + ": " + what);
  };
  require(s.n_requests >= 1, "n_requests must be >= 1");
  require(s.batch_size >= 1, "batch_size must be >= 1");
  require(s.input_len >= 1, "input_len must be >= 1");
  require(s.max_output_length >= 1, "max_output_length must be >= 1");
  require(s.bytes_per_sequence >= 1, "bytes_per_sequence must be >= 1");
  require(s.tp.tp_size >= 1, "tp_size must be >= 1");
  require(s.batching.window_ms >= 0.0, "window_ms must be >= 0");
  require(s.batching.max_batch >= 1, "max_batch must be >= 1");
  if (const auto* c = std::get_if<ConstantArrival>(&s.arrival)) {
    require(c->interval >= 0.0, "constant interval must be >= 0");
  } else {
    require(std::get<PoissonArrival>(s.arrival).mean_interval > 0.0, "poisson mean must be > 0");
  }
  try {
    validate(s.lengths);
  } catch (const Error& e) {
    require(false, e.what());
  }
  const Tokens longest = std::visit(
      [](const auto& d) -> Tokens {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, FixedLength>) {
          return d.length;
        } else {
          return d.hi;
        }
      },
      s.lengths);
  require(longest <= s.max_output_length, "length distribution exceeds max_output_length");
}

// Arrivals and lengths come from independent streams of the same seed, so a
// seed gives the same uniforms at every mean interval.
inline Workload make_workload(const Scenario& s, std::uint64_t seed) {
  validate(s);

  ArrivalSchedule schedule;
  std::vector<Tokens> lengths;
  try {
    if (const auto* c = std::get_if<ConstantArrival>(&s.arrival)) {
      schedule = constant_schedule(s.n_requests, c->interval, s.start_ms);
    } else {
      schedule = poisson_schedule(s.n_requests, std::get<PoissonArrival>(s.arrival).mean_interval,
                                  derive_seed(seed, 0), s.start_ms);
    }
    lengths = sample_output_lengths(s.n_requests, s.lengths, derive_seed(seed, 1));
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, e.what());
  }

  Workload w;
  w.bytes_per_sequence = s.bytes_per_sequence;
  w.requests.reserve(s.n_requests);
  for (std::size_t i = 0; i < s.n_requests; ++i) {
    Request r;
    r.id = static_cast<RequestId>(i);
    r.batch_size = s.batch_size;
    r.input_len = s.input_len;
    r.max_output_length = s.max_output_length;
    r.actual_output_length = lengths[i];
    r.arrival_time = schedule[i].time;
    w.requests.push_back(r);
  }
  return w;
}

inline Trace run_workload(const Workload& w, Discipline d, const Scenario& s, const CostParams& params) {
  switch (d) {
    case Discipline::Fusion:
      return run_fusion(w, params, s.tp, {true, s.noshuffle_trim, s.max_slots});
    case Discipline::FusionNoShuffle:
      return run_fusion(w, params, s.tp, {false, s.noshuffle_trim, s.max_slots});
    case Discipline::DynamicBatching:
      return run_dynamic_batching(w, params, s.tp, s.batching);
    case Discipline::ConcurrentInstances:
      return run_concurrent_instances(w, params, s.tp);
  }
  throw Error(Errc::ConfigError, "unknown discipline");
}

inline Trace run_scenario(const Scenario& s, const CostParams& params, std::uint64_t seed) {
  return run_workload(make_workload(s, seed), s.discipline, s, params);
}

}  // namespace tfsim
