#include <gtest/gtest.h>

#include "tnrss/harness.hpp"

using namespace tnrss;

namespace {

TEST(CorrectnessSuite, SmallGridPasses) {
  CorrectnessConfig cfg;
  cfg.epochs = 2;
  cfg.seed = 7;
  const SuiteReport rep = run_correctness_suite(cfg);
  EXPECT_TRUE(rep.passed()) << rep.text();
  EXPECT_EQ(rep.trials, 3u * 4 * 2);
}

TEST(CorrectnessSuite, ZeroEpochsIsVacuous) {
  CorrectnessConfig cfg;
  cfg.epochs = 0;
  const SuiteReport rep = run_correctness_suite(cfg);
  EXPECT_EQ(rep.trials, 0u);
  EXPECT_TRUE(rep.passed());
}

TEST(CorrectnessSuite, InjectedFaultIsReportedAlone) {
  CorrectnessConfig cfg;
  cfg.params = {{2, 3}};
  cfg.sizes = {1, 8};
  cfg.epochs = 3;
  cfg.seed = 9;
  cfg.fault_trial = 4;
  const SuiteReport rep = run_correctness_suite(cfg);
  EXPECT_EQ(rep.failures, 1u);
  ASSERT_EQ(rep.failing_instances.size(), 1u);
  EXPECT_EQ(rep.failing_instances[0].rfind("trial 4 ", 0), 0u) << rep.failing_instances[0];
}

TEST(CorrectnessSuite, SameSeedSameReport) {
  CorrectnessConfig cfg;
  cfg.params = {{2, 3}};
  cfg.sizes = {0, 3};
  cfg.seed = 42;
  EXPECT_EQ(run_correctness_suite(cfg).text(), run_correctness_suite(cfg).text());
  EXPECT_EQ(run_correctness_suite(cfg).summary().dump(), run_correctness_suite(cfg).summary().dump());
}

TEST(TransparencyCheck, AllExact) {
  const SuiteReport rep = run_transparency_check(30, 5);
  EXPECT_EQ(rep.trials, 30u);
  EXPECT_TRUE(rep.passed()) << rep.text();
}

TEST(ThresholdBoundary, TwoOfThree) {
  const SuiteReport rep = run_threshold_boundary_check(2, 3, 2, 3);
  EXPECT_TRUE(rep.passed()) << rep.text();
  EXPECT_EQ(rep.lines[0], "(t-1)-subsets rejected 6/6");
  EXPECT_EQ(rep.lines[1], "t-subsets accepted 6/6");
}

TEST(ThresholdBoundary, DegenerateOneOfOne) {
  const SuiteReport rep = run_threshold_boundary_check(1, 1, 1, 3);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.lines[0], "(t-1)-subsets rejected 0/0");
  EXPECT_EQ(rep.lines[1], "t-subsets accepted 1/1");
}

TEST(ThresholdBoundary, ThreeOfFiveCounts) {
  const SuiteReport rep = run_threshold_boundary_check(3, 5, 1, 4);
  EXPECT_TRUE(rep.passed());
  EXPECT_EQ(rep.lines[0], "(t-1)-subsets rejected 10/10");
  EXPECT_EQ(rep.lines[1], "t-subsets accepted 10/10");
}

TEST(SubsetEnumeration, CountsMatchBinomials) {
  int count = 0;
  detail::for_each_subset(5, 2, [&](const IndexSet& s) {
    EXPECT_EQ(s.size(), 2u);
    ++count;
  });
  EXPECT_EQ(count, 10);
  count = 0;
  detail::for_each_subset(4, 0, [&](const IndexSet& s) {
    EXPECT_TRUE(s.empty());
    ++count;
  });
  EXPECT_EQ(count, 1);
}

class ForgeryDemo : public ::testing::Test {
 protected:
  void SetUp() override {
    SeededRandom rng(77);
    km_ = keygen(2, 3, rng);
  }
  KeyMaterial km_;
};

TEST_F(ForgeryDemo, UnprotectedForges) {
  const AttackTranscript tr = run_forgery_demo(km_);
  EXPECT_TRUE(tr.original.verifies);
  EXPECT_TRUE(tr.first.verifies);
  ASSERT_TRUE(tr.second.has_value());
  EXPECT_TRUE(tr.second->verifies);
  ASSERT_TRUE(tr.forged.has_value());
  EXPECT_TRUE(tr.forged->verifies);
  EXPECT_TRUE(tr.forged_is_novel);
  EXPECT_TRUE(tr.forgery_succeeded());
  EXPECT_EQ(tr.forged->doc.blocks, (BlockSet{Block("m1"), Block("m3")}));
  EXPECT_TRUE(tr.forged->doc.adm.empty());
  EXPECT_NE(describe(tr).find("forged signature VERIFIES"), std::string::npos);
}

TEST_F(ForgeryDemo, ProtectedAbortsAtSecondRedaction) {
  ForgeryDemoConfig cfg;
  cfg.replay_protection = true;
  const AttackTranscript tr = run_forgery_demo(km_, cfg);
  EXPECT_EQ(tr.second_abort, ErrorCode::DidReplayed);
  EXPECT_FALSE(tr.forged.has_value());
  EXPECT_FALSE(tr.forgery_succeeded());
  EXPECT_NE(describe(tr).find("DidReplayed"), std::string::npos);
}

// With MOD1 = MOD2 = {m1} the second round has nothing to remove and the
// spliced tuple is just the original.
TEST_F(ForgeryDemo, EqualModsGiveNonNovelTuple) {
  ForgeryDemoConfig cfg;
  cfg.mod2 = cfg.mod1;
  const AttackTranscript tr = run_forgery_demo(km_, cfg);
  ASSERT_TRUE(tr.forged.has_value());
  EXPECT_TRUE(tr.forged->doc == tr.original.doc);
  EXPECT_TRUE(tr.forged->sig == tr.original.sig);
  EXPECT_TRUE(tr.forged->verifies);
  EXPECT_FALSE(tr.forged_is_novel);
  EXPECT_FALSE(tr.forgery_succeeded());
}

TEST_F(ForgeryDemo, Deterministic) {
  EXPECT_EQ(describe(run_forgery_demo(km_)), describe(run_forgery_demo(km_)));
}

TEST_F(ForgeryDemo, ProtectedActionSpaceHasNoForgery) {
  const SuiteReport rep = run_replay_protection_search(km_);
  EXPECT_EQ(rep.trials, 64u);
  EXPECT_TRUE(rep.passed()) << rep.text();
}

}  // namespace
