#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tfsim/core.hpp"
#include "tfsim/random.hpp"

namespace tfsim {

struct Arrival {
  RequestId id = 0;
  Millis time = 0.0;
};

// Ordered by time (non-decreasing); ids are 0..n-1.
using ArrivalSchedule = std::vector<Arrival>;

struct FixedLength {
  Tokens length = 1;
};

// Integer lengths drawn uniformly from [lo, hi], both ends attainable.
struct UniformLength {
  Tokens lo = 1;
  Tokens hi = 1;
};

using LengthDistribution = std::variant<FixedLength, UniformLength>;

inline void validate(const LengthDistribution& dist) {
  if (const auto* f = std::get_if<FixedLength>(&dist)) {
    check(f->length >= 1, Errc::InvalidParam, "fixed length must be >= 1");
  } else {
    const auto& u = std::get<UniformLength>(dist);
    check(u.lo >= 1, Errc::InvalidParam, "uniform lower bound must be >= 1");
    check(u.lo <= u.hi, Errc::InvalidParam, "uniform bounds must satisfy lo <= hi");
  }
}

inline ArrivalSchedule constant_schedule(std::size_t n, Millis interval, Millis start = 0.0) {
  check(n >= 1, Errc::InvalidParam, "schedule needs at least one request");
  check(interval >= 0.0, Errc::InvalidParam, "interval must be >= 0");
  ArrivalSchedule out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({static_cast<RequestId>(i), start + static_cast<double>(i) * interval});
  }
  return out;
}

// Exponential inter-arrival gaps with the given mean, sampled by inverse CDF:
// gap = -mean * ln(1 - u), u uniform in [0, 1). The first request lands on start.
inline ArrivalSchedule poisson_schedule(std::size_t n, Millis mean_interval, std::uint64_t seed,
                                        Millis start = 0.0) {
  check(n >= 1, Errc::InvalidParam, "schedule needs at least one request");
  check(mean_interval > 0.0, Errc::InvalidParam, "mean interval must be > 0");
  Xoshiro256 rng(seed);
  ArrivalSchedule out;
  out.reserve(n);
  Millis t = start;
  out.push_back({0, t});
  for (std::size_t i = 1; i < n; ++i) {
    t += -mean_interval * std::log1p(-rng.next_double());
    out.push_back({static_cast<RequestId>(i), t});
  }
  return out;
}

inline std::vector<Tokens> sample_output_lengths(std::size_t n, const LengthDistribution& dist,
                                                 std::uint64_t seed) {
  check(n >= 1, Errc::InvalidParam, "need at least one sample");
  validate(dist);
  std::vector<Tokens> out(n);
  if (const auto* f = std::get_if<FixedLength>(&dist)) {
    std::fill(out.begin(), out.end(), f->length);
    return out;
  }
  const auto& u = std::get<UniformLength>(dist);
  Xoshiro256 rng(seed);
  for (auto& v : out) {
    v = static_cast<Tokens>(rng.next_in(u.lo, u.hi));
  }
  return out;
}

// Fraction of two consecutive requests' runtimes that coincide when each takes
// request_ms and they arrive interval_ms apart.
inline double overlap_ratio(Millis request_ms, Millis interval_ms) {
  check(request_ms > 0.0, Errc::InvalidParam, "request runtime must be > 0");
  check(interval_ms >= 0.0, Errc::InvalidParam, "interval must be >= 0");
  if (request_ms <= interval_ms) {
    return 0.0;
  }
  return (request_ms - interval_ms) / (request_ms + interval_ms);
}

// Standard deviation of the continuous uniform distribution on [lo, hi].
inline double uniform_std(double lo, double hi) {
  check(lo <= hi, Errc::InvalidParam, "uniform_std requires lo <= hi");
  return (hi - lo) / std::sqrt(12.0);
}

}  // namespace tfsim
