#pragma once

#include <string>
#include <vector>

#include "tfsim/core.hpp"

namespace tfsim {

// The requests an engine serves. Ids must be 0..n-1 and arrivals
// non-decreasing in id order.
struct Workload {
  std::vector<Request> requests;
  Bytes bytes_per_sequence = Bytes{1} << 20;

  Bytes tensor_size(const Request& r) const { return bytes_per_sequence * r.batch_size; }
};

inline void validate(const Workload& w) {
  check(!w.requests.empty(), Errc::ConfigError, "workload has no requests");
  check(w.bytes_per_sequence > 0, Errc::ConfigError, "bytes_per_sequence must be > 0");
  for (std::size_t i = 0; i < w.requests.size(); ++i) {
    const Request& r = w.requests[i];
    check(r.id == i, Errc::ConfigError, "request ids must be 0..n-1 in order");
    try {
      validate(r);
    } catch (const Error& e) {
      throw Error(Errc::ConfigError, e.what());
    }
    check(i == 0 || w.requests[i - 1].arrival_time <= r.arrival_time, Errc::ConfigError,
          "arrival times must be non-decreasing");
  }
}

}  // namespace tfsim
