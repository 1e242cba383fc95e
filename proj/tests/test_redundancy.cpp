#include <gtest/gtest.h>

#include "pimecc/errors.hpp"
#include "pimecc/redundancy.hpp"
#include "pimecc/workloads.hpp"
#include "test_support.hpp"

namespace pimecc {
namespace {

TEST(RedundancyCost, SpaceOnlyAndTimeOnlyExtremes) {
  RedundancyPlan tmr;
  tmr.copies = 3;
  tmr.space_fraction = 1.0;
  auto c = redundancy_cost(tmr, 100, 50);
  EXPECT_DOUBLE_EQ(c.area_overhead_pct, 200.0);
  EXPECT_DOUBLE_EQ(c.latency_overhead_pct, 0.0);
  tmr.space_fraction = 0.0;
  c = redundancy_cost(tmr, 100, 50);
  EXPECT_DOUBLE_EQ(c.area_overhead_pct, 0.0);
  EXPECT_DOUBLE_EQ(c.latency_overhead_pct, 200.0);
  EXPECT_DOUBLE_EQ(c.cycles, 300.0);
}

TEST(RedundancyCost, HybridSplitsLinearly) {
  RedundancyPlan p;
  p.copies = 3;
  p.space_fraction = 0.7;
  const auto c = redundancy_cost(p, 1000, 400);
  EXPECT_NEAR(c.area_overhead_pct, 140.0, 1e-9);
  EXPECT_NEAR(c.latency_overhead_pct, 60.0, 1e-9);
  p.copies = 2;
  const auto d = redundancy_cost(p, 1000, 400);
  EXPECT_NEAR(d.area_overhead_pct, 70.0, 1e-9);
  EXPECT_NEAR(d.latency_overhead_pct, 30.0, 1e-9);
}

TEST(RedundancyCost, VoteCostsAreAdded) {
  RedundancyPlan p;
  p.vote_cycles = 5;
  p.vote_columns = 8;
  const auto c = redundancy_cost(p, 100, 80);
  EXPECT_NEAR(c.latency_overhead_pct, 5.0, 1e-9);
  EXPECT_NEAR(c.area_overhead_pct, 210.0, 1e-9);
}

TEST(RedundancyCost, RejectsBadPlans) {
  RedundancyPlan p;
  p.copies = 4;
  EXPECT_THROW(redundancy_cost(p, 10, 10), ConfigError);
  p.copies = 3;
  p.space_fraction = 1.5;
  EXPECT_THROW(redundancy_cost(p, 10, 10), ConfigError);
  p.space_fraction = 0.5;
  EXPECT_THROW(redundancy_cost(p, 0, 10), ConfigError);
}

TEST(IsoArea, AlphaMatchesTargetArea) {
  EXPECT_DOUBLE_EQ(iso_area_alpha(35.0, 3), 0.175);
  EXPECT_DOUBLE_EQ(iso_area_alpha(50.0, 2), 0.5);
  RedundancyPlan p;
  p.space_fraction = iso_area_alpha(23.5, 3);
  EXPECT_NEAR(redundancy_cost(p, 10, 10).area_overhead_pct, 23.5, 1e-9);
  EXPECT_THROW(iso_area_alpha(250.0, 3), ConfigError);
  EXPECT_THROW(iso_area_alpha(-1.0, 3), ConfigError);
}

TEST(Vote, MajorityAndCompare) {
  const Bits a = {0, 0, 1, 1, 0, 1, 0, 1};
  const Bits b = {0, 1, 0, 1, 0, 1, 1, 0};
  const Bits c = {0, 1, 1, 0, 1, 0, 0, 1};
  EXPECT_EQ(majority_vote(a, b, c), (Bits{0, 1, 1, 1, 0, 1, 0, 1}));
  EXPECT_EQ(dmr_compare(a, b), (Bits{0, 1, 1, 0, 0, 0, 1, 1}));
  EXPECT_THROW(majority_vote(a, b, Bits(3)), std::invalid_argument);
}

TEST(RunRedundant, FaultFreeCopiesAgree) {
  const auto net = gen_random(30, 5, 1);
  const auto in = testing::random_rows(8, 5, 2);
  NoFaults none;
  RedundancyPlan p;
  const auto out = run_redundant(net, p, in, none);
  ASSERT_EQ(out.copies.size(), 3u);
  for (std::size_t r = 0; r < in.size(); ++r) {
    EXPECT_EQ(out.final_data[r], evaluate(net, in[r]));
    EXPECT_EQ(out.detected[r], 0);
  }
}

// Faults confined to one copy: TMR outvotes them, DMR flags them.
TEST(RunRedundant, SingleCopyFaultIsMaskedOrFlagged) {
  const auto net = gen_random(20, 4, 3);
  const auto in = testing::random_rows(1, 4, 4);
  const Bits want = evaluate(net, in[0]);
  // Writes per copy: one per gate. Flip every gate output of copy 1.
  std::vector<std::uint64_t> sites;
  for (std::uint64_t g = 0; g < 20; ++g) sites.push_back(20 + g);
  {
    ForcedFaults f(sites);
    RedundancyPlan tmr;
    const auto out = run_redundant(net, tmr, in, f);
    EXPECT_EQ(out.final_data[0], want);
    EXPECT_NE(out.copies[1][0], want);
    EXPECT_EQ(out.detected[0], 1);
  }
  {
    ForcedFaults f(sites);
    RedundancyPlan dmr;
    dmr.copies = 2;
    const auto out = run_redundant(net, dmr, in, f);
    EXPECT_EQ(out.final_data[0], want);
    EXPECT_EQ(out.detected[0], 1);
  }
}

TEST(RunRedundant, SameFaultInTwoCopiesDefeatsVote) {
  const auto net = parse_netlist("INPUT a\nNOR y a a\nOUTPUT y\n");
  const Bits in = {0};
  ForcedFaults f({0, 1});  // gate output of copies 0 and 1
  RedundancyPlan tmr;
  const auto out = run_redundant(net, tmr, std::vector<Bits>{in}, f);
  EXPECT_EQ(out.final_data[0], Bits{0});
}

}  // namespace
}  // namespace pimecc
