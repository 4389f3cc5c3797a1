#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <string_view>

#include "tfsim/core.hpp"

namespace tfsim {

// Parametric timings. Defaults: a 512-token request takes 6000 ms alone and
// the hardware absorbs up to four fused requests at no extra cost.
// Communication terms are per-iteration aggregates (every layer's collectives
// folded into one 2x allreduce + 1x allgather pattern).
struct CostParams {
  Millis base_iteration_ms = 6000.0 / 512.0;
  Millis marginal_per_request_ms = 0.5;
  std::uint32_t capacity = 4;
  Millis preprocess_ms = 6000.0 / 512.0;
  Millis alpha_intra = 0.05;
  Millis alpha_inter = 0.1;
  double beta_intra = 2.0e-6;  // ms per byte
  double beta_inter = 4.0e-6;
  double memcpy_beta = 1.0e-7;  // ms per byte moved by a shuffle
  double contention_gamma = 0.78;
};

inline void validate(const CostParams& p) {
  check(p.base_iteration_ms >= 0 && p.marginal_per_request_ms >= 0 && p.preprocess_ms >= 0 &&
            p.alpha_intra >= 0 && p.alpha_inter >= 0 && p.beta_intra >= 0 && p.beta_inter >= 0 &&
            p.memcpy_beta >= 0 && p.contention_gamma >= 0,
        Errc::InvalidParam, "cost parameters must be non-negative");
  check(p.capacity >= 1, Errc::InvalidParam, "capacity must be >= 1");
}

enum class Placement : std::uint8_t { Intra, Inter };

constexpr std::string_view to_string(Placement p) { return p == Placement::Intra ? "intra" : "inter"; }

struct TPConfig {
  std::uint32_t tp_size = 1;
  Placement placement = Placement::Intra;
};

/// Two allreduces and one allgather on message_bytes, with the link
/// latency/bandwidth picked by placement. Only meaningful for tp_size >= 2.
inline Millis comm_time(double message_bytes, const TPConfig& tp, const CostParams& p) {
  check(tp.tp_size >= 2, Errc::InvalidParam, "comm_time needs tp_size >= 2");
  const bool intra = tp.placement == Placement::Intra;
  const Millis alpha = intra ? p.alpha_intra : p.alpha_inter;
  const double beta = intra ? p.beta_intra : p.beta_inter;
  const Millis one = alpha + beta * message_bytes;
  return 2.0 * one + one;
}

// Duration of one atomic iteration over `active` fused requests whose window
// spans live_bytes. Collectives carry the window divided across the shards.
inline Millis iteration_time(std::size_t active, Bytes live_bytes, const CostParams& p,
                             const TPConfig& tp) {
  check(active >= 1, Errc::InvalidParam, "iteration needs at least one request");
  check(tp.tp_size >= 1, Errc::InvalidParam, "tp_size must be >= 1");
  const std::size_t extra = active > p.capacity ? active - p.capacity : 0;
  Millis t = p.base_iteration_ms + p.marginal_per_request_ms * static_cast<double>(extra);
  if (tp.tp_size > 1) {
    t += comm_time(static_cast<double>(live_bytes) / tp.tp_size, tp, p);
  }
  return t;
}

// Slowdown of each instance while k instances share the device.
inline double contention_factor(std::size_t k, const CostParams& p) {
  check(k >= 1, Errc::InvalidParam, "contention needs k >= 1");
  return 1.0 + p.contention_gamma * static_cast<double>(k - 1);
}

// Stream stall while a shuffle copies bytes_moved.
inline Millis shuffle_time(Bytes bytes_moved, const CostParams& p) {
  return p.memcpy_beta * static_cast<double>(bytes_moved);
}

}  // namespace tfsim
