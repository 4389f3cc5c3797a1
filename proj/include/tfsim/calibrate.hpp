#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "tfsim/metrics.hpp"
#include "tfsim/scenario.hpp"

namespace tfsim {

struct CalibrationAnchors {
  Millis single_request_ms = 6000.0;  // one request alone
  Tokens tokens = 512;
  double speedup_target = 11.2;  // concurrent / fusion makespan
  ArrivalSpec arrival = PoissonArrival{20.0};
  std::size_t n_requests = 32;
  std::vector<std::uint64_t> seeds = default_seeds();
  double tolerance = 0.05;  // relative
  double gamma_max = 10.0;

  static std::vector<std::uint64_t> default_seeds() {
    std::vector<std::uint64_t> s(20);
    std::iota(s.begin(), s.end(), std::uint64_t{1});
    return s;
  }
};

struct CalibrationResult {
  CostParams params;
  double achieved_speedup = 1.0;
};

// Ensemble mean of baseline makespan / fusion makespan over matched seeds.
inline double mean_speedup(const Scenario& scenario, Discipline baseline, const CostParams& params,
                           const std::vector<std::uint64_t>& seeds) {
  check(!seeds.empty(), Errc::ConfigError, "need at least one seed");
  double sum = 0.0;
  for (const auto seed : seeds) {
    const Workload w = make_workload(scenario, seed);
    const std::size_t n = w.requests.size();
    const double fusion = compute_metrics(run_workload(w, Discipline::Fusion, scenario, params), n).makespan;
    const double other = compute_metrics(run_workload(w, baseline, scenario, params), n).makespan;
    sum += other / fusion;
  }
  return sum / static_cast<double>(seeds.size());
}

/// Sets the per-iteration time from the single-request anchor, then searches
/// contention_gamma by bisection so the simulated fusion vs concurrent speedup
/// hits the target. The engines are only observed through their traces.
inline CalibrationResult calibrate(const CalibrationAnchors& anchors, CostParams params = {}) {
  check(anchors.single_request_ms > 0 && anchors.tokens > 0, Errc::CalibrationFailed,
        "single-request anchor must be positive");
  check(anchors.speedup_target > 0, Errc::CalibrationFailed, "speedup target must be positive");
  params.base_iteration_ms = anchors.single_request_ms / anchors.tokens;

  Scenario s;
  s.name = "calibration";
  s.n_requests = anchors.n_requests;
  s.arrival = anchors.arrival;
  s.lengths = FixedLength{anchors.tokens};
  s.max_output_length = anchors.tokens;

  // Fusion makespans do not depend on gamma.
  std::vector<Workload> workloads;
  std::vector<double> fusion;
  for (const auto seed : anchors.seeds) {
    workloads.push_back(make_workload(s, seed));
    fusion.push_back(compute_metrics(run_workload(workloads.back(), Discipline::Fusion, s, params),
                                     anchors.n_requests)
                         .makespan);
  }
  auto speedup_at = [&](double gamma) {
    CostParams p = params;
    p.contention_gamma = gamma;
    double sum = 0.0;
    for (std::size_t i = 0; i < workloads.size(); ++i) {
      const Trace t = run_workload(workloads[i], Discipline::ConcurrentInstances, s, p);
      sum += compute_metrics(t, anchors.n_requests).makespan / fusion[i];
    }
    return sum / static_cast<double>(workloads.size());
  };

  const double target = anchors.speedup_target;
  const double tol = anchors.tolerance * target;
  const double at_zero = speedup_at(0.0);
  if (std::abs(at_zero - target) <= tol) {
    params.contention_gamma = 0.0;
    return {params, at_zero};
  }
  check(at_zero < target, Errc::CalibrationFailed,
        "speedup without contention already exceeds the target");
  const double at_max = speedup_at(anchors.gamma_max);
  check(at_max >= target - tol, Errc::CalibrationFailed,
        "no contention_gamma in range reaches the target speedup");

  double lo = 0.0;
  double hi = anchors.gamma_max;
  double gamma = hi;
  double achieved = at_max;
  for (int iter = 0; iter < 60; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double s_mid = speedup_at(mid);
    gamma = mid;
    achieved = s_mid;
    if (std::abs(s_mid - target) <= 1e-4 * target) {
      break;
    }
    (s_mid < target ? lo : hi) = mid;
  }
  params.contention_gamma = gamma;
  return {params, achieved};
}

}  // namespace tfsim
