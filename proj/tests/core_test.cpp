#include <gtest/gtest.h>

#include "tfsim/core.hpp"

namespace tfsim {
namespace {

template <typename F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected tfsim::Error";
  return Errc::ConfigError;
}

TEST(AdvancePhase, FollowsTheChain) {
  EXPECT_EQ(advance_phase(Phase::Received, Phase::Preprocessing), Phase::Preprocessing);
  EXPECT_EQ(advance_phase(Phase::Running, Phase::Finished), Phase::Finished);

  Phase p = Phase::Received;
  for (Phase next : {Phase::Preprocessing, Phase::ReadyForFusion, Phase::Running, Phase::Finished}) {
    p = advance_phase(p, next);
  }
  EXPECT_EQ(p, Phase::Finished);
}

TEST(AdvancePhase, RejectsSkipsAndRevisits) {
  EXPECT_EQ(error_code([] { advance_phase(Phase::Received, Phase::Running); }),
            Errc::IllegalTransition);
  EXPECT_EQ(error_code([] { advance_phase(Phase::Running, Phase::Running); }),
            Errc::IllegalTransition);
  EXPECT_EQ(error_code([] { advance_phase(Phase::Finished, Phase::Received); }),
            Errc::IllegalTransition);
  EXPECT_EQ(error_code([] { advance_phase(Phase::ReadyForFusion, Phase::Preprocessing); }),
            Errc::IllegalTransition);
}

RuntimeInfo info_at(Tokens iteration, Tokens max) {
  RuntimeInfo info;
  info.request_id = 7;
  info.max_output_length = max;
  info.current_iteration = iteration;
  return info;
}

TEST(RecordToken, FirstToken) {
  const auto res = record_token(info_at(0, 300), 300);
  EXPECT_EQ(res.info.current_iteration, 1U);
  EXPECT_FALSE(res.finished);
}

TEST(RecordToken, ReachesMaxLength) {
  const auto res = record_token(info_at(299, 300), 300);
  EXPECT_EQ(res.info.current_iteration, 300U);
  EXPECT_TRUE(res.finished);
}

TEST(RecordToken, EarlyEndOfSequence) {
  const auto res = record_token(info_at(457, 512), 458);
  EXPECT_EQ(res.info.current_iteration, 458U);
  EXPECT_TRUE(res.finished);
}

TEST(RecordToken, FinishedFlagMatchesEnumeration) {
  for (Tokens max = 1; max <= 16; ++max) {
    for (Tokens eos = 1; eos <= 16; ++eos) {
      for (Tokens it = 0; it < max; ++it) {
        const auto res = record_token(info_at(it, max), eos);
        const Tokens stop = eos < max ? eos : max;
        EXPECT_EQ(res.info.current_iteration, it + 1);
        EXPECT_EQ(res.finished, it + 1 == stop) << "it=" << it << " eos=" << eos << " max=" << max;
      }
    }
  }
}

TEST(RecordToken, TokensOverLifetimeEqualStopPoint) {
  for (Tokens max = 1; max <= 16; ++max) {
    for (Tokens eos = 1; eos <= 16; ++eos) {
      RuntimeInfo info = info_at(0, max);
      Tokens calls = 0;
      bool finished = false;
      while (!finished) {
        const Tokens before = info.current_iteration;
        const auto res = record_token(info, eos);
        ASSERT_GT(res.info.current_iteration, before);
        info = res.info;
        finished = res.finished;
        ++calls;
      }
      EXPECT_EQ(calls, std::min(eos, max));
    }
  }
}

TEST(RecordToken, AlreadyFinished) {
  EXPECT_EQ(error_code([] { record_token(info_at(300, 300), 300); }), Errc::AlreadyFinished);
}

TEST(Request, Validation) {
  Request r;
  r.max_output_length = 512;
  r.actual_output_length = 512;
  EXPECT_NO_THROW(validate(r));
  EXPECT_EQ(r.output_tokens(), 512U);

  Request too_long = r;
  too_long.actual_output_length = 513;
  EXPECT_EQ(error_code([&] { validate(too_long); }), Errc::InvalidParam);

  Request zero_batch = r;
  zero_batch.batch_size = 0;
  EXPECT_EQ(error_code([&] { validate(zero_batch); }), Errc::InvalidParam);

  Request negative = r;
  negative.arrival_time = -1.0;
  EXPECT_EQ(error_code([&] { validate(negative); }), Errc::InvalidParam);
}

}  // namespace
}  // namespace tfsim
