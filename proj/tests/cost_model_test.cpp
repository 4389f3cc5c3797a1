#include <gtest/gtest.h>

#include "tfsim/cost_model.hpp"

namespace tfsim {
namespace {

constexpr TPConfig kSingle{1, Placement::Intra};
constexpr TPConfig kPairIntra{2, Placement::Intra};
constexpr TPConfig kPairInter{2, Placement::Inter};

TEST(IterationTime, SingleRequestIsBase) {
  const CostParams p;
  EXPECT_DOUBLE_EQ(p.base_iteration_ms, 11.71875);
  EXPECT_DOUBLE_EQ(iteration_time(1, 1 << 20, p, kSingle), 11.71875);
}

TEST(IterationTime, FlatUpToCapacity) {
  const CostParams p;
  for (std::size_t a = 1; a <= p.capacity; ++a) {
    EXPECT_EQ(iteration_time(a, 0, p, kSingle), iteration_time(1, 0, p, kSingle));
  }
  EXPECT_DOUBLE_EQ(iteration_time(p.capacity + 3, 0, p, kSingle),
                   p.base_iteration_ms + 3 * p.marginal_per_request_ms);
}

TEST(IterationTime, ZeroByteCollectivesCostLatencyOnly) {
  const CostParams p;
  EXPECT_DOUBLE_EQ(iteration_time(1, 0, p, kPairIntra), p.base_iteration_ms + 3 * p.alpha_intra);
}

TEST(IterationTime, MessageSplitAcrossShards) {
  CostParams p;
  p.alpha_intra = 0.0;
  p.beta_intra = 1e-3;
  // 4000 bytes over 2 shards: 3 collectives of 2000 bytes at 1e-3 ms/byte.
  EXPECT_DOUBLE_EQ(iteration_time(1, 4000, p, kPairIntra), p.base_iteration_ms + 6.0);
  EXPECT_DOUBLE_EQ(iteration_time(1, 4000, p, TPConfig{4, Placement::Intra}), p.base_iteration_ms + 3.0);
}

TEST(IterationTime, MonotoneInEveryInput) {
  const CostParams p;
  for (std::size_t a = 1; a < 12; ++a) {
    for (Bytes b = 0; b < (Bytes{20} << 20); b += Bytes{1} << 20) {
      for (const auto& tp : {kSingle, kPairIntra, kPairInter}) {
        const Millis t = iteration_time(a, b, p, tp);
        EXPECT_LE(t, iteration_time(a + 1, b, p, tp));
        EXPECT_LE(t, iteration_time(a, b + (Bytes{1} << 20), p, tp));
      }
    }
  }
  CostParams slower = p;
  slower.alpha_intra *= 2;
  slower.beta_intra *= 2;
  EXPECT_LT(iteration_time(3, 1 << 22, p, kPairIntra), iteration_time(3, 1 << 22, slower, kPairIntra));
}

TEST(IterationTime, InvalidInputs) {
  const CostParams p;
  EXPECT_THROW(iteration_time(0, 0, p, kSingle), Error);
  EXPECT_THROW(iteration_time(1, 0, p, TPConfig{0, Placement::Intra}), Error);
}

TEST(CommTime, Examples) {
  const CostParams p;
  EXPECT_DOUBLE_EQ(comm_time(0, kPairIntra, p), 3 * p.alpha_intra);
  EXPECT_GE(comm_time(1e6, kPairInter, p), comm_time(1e6, kPairIntra, p));
  EXPECT_DOUBLE_EQ(comm_time(1e6, kPairIntra, p), 3 * (p.alpha_intra + p.beta_intra * 1e6));
  EXPECT_THROW(comm_time(10, kSingle, p), Error);
}

TEST(ContentionFactor, Examples) {
  CostParams p;
  p.contention_gamma = 0.3;
  EXPECT_DOUBLE_EQ(contention_factor(1, p), 1.0);
  EXPECT_DOUBLE_EQ(contention_factor(2, p), 1.3);
  p.contention_gamma = 0.0;
  for (std::size_t k = 1; k < 50; ++k) EXPECT_EQ(contention_factor(k, p), 1.0);
  for (double g : {0.0, 0.1, 2.5, 100.0}) {
    p.contention_gamma = g;
    EXPECT_EQ(contention_factor(1, p), 1.0);
  }
  EXPECT_THROW(contention_factor(0, p), Error);
}

TEST(ShuffleTime, Examples) {
  CostParams p;
  EXPECT_EQ(shuffle_time(0, p), 0.0);
  p.memcpy_beta = 0.001;
  EXPECT_DOUBLE_EQ(shuffle_time(1000, p), 1.0);
}

TEST(CostParams, Validation) {
  EXPECT_NO_THROW(validate(CostParams{}));
  CostParams bad;
  bad.capacity = 0;
  EXPECT_THROW(validate(bad), Error);
  CostParams negative;
  negative.beta_inter = -1;
  EXPECT_THROW(validate(negative), Error);
}

}  // namespace
}  // namespace tfsim
