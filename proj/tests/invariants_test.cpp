#include <gtest/gtest.h>

#include "property_checks.hpp"

namespace tfsim::testing {
namespace {

TEST(Invariants, RandomScenarios) {
  const CostParams p;
  std::size_t shuffles = 0;
  for (const auto& c : property_cases(600)) {
    for (const auto& failure : check_case(c, p)) ADD_FAILURE() << failure;
    shuffles += count_shuffles(c, p);
  }
  EXPECT_GT(shuffles, 100U);  // the cases actually exercise the shuffle
}

TEST(Invariants, SuiteCsvReproducible) { EXPECT_TRUE(suite_csv_reproducible()); }

}  // namespace
}  // namespace tfsim::testing
