#include <gtest/gtest.h>

#include "pimecc/scheduler.hpp"

namespace pimecc {
namespace {

GateOp nor(Column a, Column b, Column out, OpRole role = OpRole::EccUpdate) {
  return GateOp::make(GateKind::Nor2_1, {a, b}, {out}, role);
}

TEST(PartitionMap, SplitsAtBoundaries) {
  const PartitionMap pm({4, 8});
  EXPECT_EQ(pm.partition_of(0), 0u);
  EXPECT_EQ(pm.partition_of(3), 0u);
  EXPECT_EQ(pm.partition_of(4), 1u);
  EXPECT_EQ(pm.partition_of(7), 1u);
  EXPECT_EQ(pm.partition_of(8), 2u);
  EXPECT_EQ(pm.partition_of(100), 2u);
}

TEST(Dependencies, ReadAfterWrite) {
  const std::vector<GateOp> ops = {nor(0, 1, 2), nor(2, 3, 4)};
  const auto g = build_dependencies(ops, false);
  EXPECT_TRUE(g.preds[0].empty());
  EXPECT_EQ(g.preds[1], std::vector<std::size_t>{0});
}

TEST(Dependencies, WriteAfterReadAndWrite) {
  const std::vector<GateOp> ops = {nor(0, 1, 2), nor(2, 3, 4), nor(5, 6, 2)};
  const auto g = build_dependencies(ops, false);
  EXPECT_EQ(g.preds[2], (std::vector<std::size_t>{0, 1}));
}

TEST(Dependencies, IndependentOpsHaveNone) {
  const std::vector<GateOp> ops = {nor(0, 1, 2), nor(0, 1, 3), nor(4, 5, 6)};
  const auto g = build_dependencies(ops, false);
  for (const auto& p : g.preds) EXPECT_TRUE(p.empty());
}

TEST(Dependencies, ComputeChainOrdersComputeOps) {
  const std::vector<GateOp> ops = {nor(0, 1, 2, OpRole::Compute), nor(3, 4, 5),
                                   nor(6, 7, 8, OpRole::Compute)};
  EXPECT_EQ(build_dependencies(ops, true).preds[2], std::vector<std::size_t>{0});
  EXPECT_TRUE(build_dependencies(ops, false).preds[2].empty());
}

TEST(ListSchedule, OneOpPerPartitionPerCycle) {
  std::vector<GateOp> ops = {nor(0, 1, 2), nor(0, 1, 3), nor(10, 11, 12)};
  const PartitionMap pm({8});
  const auto cycles = list_schedule(ops, pm, false);
  ASSERT_EQ(cycles.size(), 2u);
  EXPECT_EQ(cycles[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(cycles[1], std::vector<std::size_t>{1});
  EXPECT_TRUE(validate_cycles(ops, pm, false).empty());
}

TEST(ListSchedule, SpanningOpBlocksEveryPartitionItCrosses) {
  std::vector<GateOp> ops = {GateOp::make(GateKind::Copy, {2}, {10}), nor(0, 1, 3), nor(12, 13, 14)};
  const PartitionMap pm({4, 8, 12});
  const auto cycles = list_schedule(ops, pm, false);
  // op 0 spans partitions 0..2; op 2 lives in partition 3 and can join it
  EXPECT_EQ(cycles[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(cycles[1], std::vector<std::size_t>{1});
}

TEST(ListSchedule, BlockedOpDoesNotStallLaterOnes) {
  // op 1 waits on op 0 (same partition); op 2 is free and goes first with op 0
  std::vector<GateOp> ops = {nor(0, 1, 2), nor(2, 3, 4), nor(9, 10, 11)};
  const PartitionMap pm({8});
  const auto cycles = list_schedule(ops, pm, false);
  ASSERT_EQ(cycles.size(), 2u);
  EXPECT_EQ(cycles[0], (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(ops[1].cycle, 1u);
}

TEST(ListSchedule, RespectsDependencyChains) {
  std::vector<GateOp> ops;
  for (Column c = 0; c < 10; ++c) ops.push_back(nor(3 * c, 3 * c + 1, 3 * c + 3));
  const auto cycles = list_schedule(ops, PartitionMap{}, false);
  EXPECT_EQ(cycles.size(), 10u);
  for (std::size_t j = 0; j < ops.size(); ++j) EXPECT_EQ(ops[j].cycle, j);
}

TEST(ValidateCycles, ReportsEarlyDependentsAndOverlaps) {
  std::vector<GateOp> ops = {nor(0, 1, 2), nor(2, 3, 4)};
  ops[0].cycle = 0;
  ops[1].cycle = 0;
  const auto problems = validate_cycles(ops, PartitionMap({8}), false);
  EXPECT_EQ(problems.size(), 2u);  // RAW too early, same partition
  ops[1].cycle = 1;
  EXPECT_TRUE(validate_cycles(ops, PartitionMap({8}), false).empty());
}

TEST(ValidateCycles, DifferentRowsDoNotConflict) {
  std::vector<GateOp> ops = {GateOp::make(GateKind::Nor2_1, {0, 1}, {2}, OpRole::Compute, 0),
                             GateOp::make(GateKind::Nor2_1, {0, 1}, {3}, OpRole::Compute, 1)};
  EXPECT_TRUE(validate_cycles(ops, PartitionMap{}, false).empty());
}

}  // namespace
}  // namespace pimecc
