#include <gtest/gtest.h>

#include <cmath>

#include "pimecc/array.hpp"
#include "pimecc/errors.hpp"
#include "pimecc/gates.hpp"

namespace pimecc {
namespace {

TEST(ArrayState, StartsClearedAndStoresBits) {
  ArrayState a(130, 5);
  EXPECT_EQ(a.words_per_column(), 3u);
  for (std::size_t r = 0; r < 130; ++r) EXPECT_FALSE(a.get(r, 4));
  a.set(129, 4, true);
  a.set(0, 0, true);
  EXPECT_TRUE(a.get(129, 4));
  EXPECT_TRUE(a.get(0, 0));
  EXPECT_FALSE(a.get(128, 4));
  a.clear();
  EXPECT_FALSE(a.get(129, 4));
}

TEST(ArrayState, RejectsOutOfRangeAccess) {
  ArrayState a(4, 4);
  EXPECT_THROW(a.get(4, 0), BoundsError);
  EXPECT_THROW(a.set(0, 4, true), BoundsError);
  EXPECT_THROW(ArrayState(0, 3), BoundsError);
  EXPECT_THROW(ArrayState(2, 4, {0}), BoundsError);
  EXPECT_THROW(ArrayState(2, 4, {2, 2}), BoundsError);
}

TEST(ArrayState, PartitionsFollowBoundaries) {
  ArrayState a(1, 10, {3, 7});
  EXPECT_EQ(a.partition_count(), 3u);
  EXPECT_EQ(a.partition_of(0), 0u);
  EXPECT_EQ(a.partition_of(2), 0u);
  EXPECT_EQ(a.partition_of(3), 1u);
  EXPECT_EQ(a.partition_of(7), 2u);
  EXPECT_FALSE(a.switch_enabled(0));
  const ArrayState b = set_switch(a, 1, true);
  EXPECT_TRUE(b.switch_enabled(1));
  EXPECT_FALSE(a.switch_enabled(1));
  EXPECT_THROW(a.set_switch(2, true), BoundsError);
}

TEST(GateOp, MakeDerivesSpanAndChecksArity) {
  const GateOp op = GateOp::make(GateKind::Nor2_1, {5, 2}, {8});
  EXPECT_EQ(op.span, (ColumnSpan{2, 8}));
  EXPECT_THROW(GateOp::make(GateKind::Nor2_1, {1}, {2}), std::invalid_argument);
  EXPECT_THROW(GateOp::make(GateKind::Nor2_2, {0, 1}, {2}), std::invalid_argument);
  EXPECT_THROW(GateOp::make(GateKind::Nor2_1, {0, 1}, {1}), std::invalid_argument);
  const GateOp r = GateOp::reset({4, 6});
  EXPECT_EQ(r.outputs, (std::vector<Column>{4, 5, 6}));
}

// Truth tables of every kind against the scalar definitions, all input
// combinations, with a stale 1 in the output cells before execution.
TEST(ExecuteGate, TruthTablesMatchDefinitions) {
  NoFaults none;
  for (GateKind kind : {GateKind::Nor2_1, GateKind::Nor2_2, GateKind::Thr4_1, GateKind::Copy}) {
    const GateKindInfo& info = gate_info(kind);
    for (unsigned v = 0; v < (1u << info.arity_in); ++v) {
      ArrayState a(1, 8);
      std::vector<Column> in, out;
      std::vector<bool> bits;
      for (unsigned i = 0; i < info.arity_in; ++i) {
        in.push_back(i);
        const bool b = (v >> i) & 1u;
        bits.push_back(b);
        a.set(0, i, b);
      }
      for (unsigned o = 0; o < info.arity_out; ++o) {
        out.push_back(6 + o);
        a.set(0, 6 + o, true);
      }
      execute_gate(a, GateOp::make(kind, in, out), none);
      bool expect = false;
      switch (kind) {
        case GateKind::Nor2_1:
        case GateKind::Nor2_2: expect = nor2(bits[0], bits[1]); break;
        case GateKind::Thr4_1: expect = thr4(bits[0], bits[1], bits[2], bits[3]); break;
        default: expect = bits[0]; break;
      }
      for (Column c : out) EXPECT_EQ(a.get(0, c), expect) << to_string(kind) << " v=" << v;
      for (unsigned i = 0; i < info.arity_in; ++i) EXPECT_EQ(a.get(0, i), bits[i]);
    }
  }
}

TEST(ExecuteGate, Thr4CountsZeros) {
  // 1 iff at least three inputs are 0
  EXPECT_TRUE(thr4(false, false, false, false));
  EXPECT_TRUE(thr4(true, false, false, false));
  EXPECT_FALSE(thr4(true, true, false, false));
  EXPECT_FALSE(thr4(true, true, true, true));
}

TEST(ExecuteGate, ResetClearsRangeOnly) {
  ArrayState a(70, 6);
  for (std::size_t r = 0; r < 70; ++r)
    for (Column c = 0; c < 6; ++c) a.set(r, c, true);
  NoFaults none;
  row_parallel_execute(a, GateOp::reset({1, 3}), none);
  for (std::size_t r = 0; r < 70; ++r) {
    EXPECT_TRUE(a.get(r, 0));
    EXPECT_FALSE(a.get(r, 1));
    EXPECT_FALSE(a.get(r, 3));
    EXPECT_TRUE(a.get(r, 4));
  }
}

TEST(ExecuteGate, RowParallelTouchesOnlyListedRows) {
  ArrayState a(100, 3);
  NoFaults none;
  const std::vector<std::size_t> rows = {1, 64, 99};
  row_parallel_execute(a, GateOp::make(GateKind::Nor2_1, {0, 1}, {2}), rows, none);
  for (std::size_t r = 0; r < 100; ++r) {
    const bool listed = r == 1 || r == 64 || r == 99;
    EXPECT_EQ(a.get(r, 2), listed) << r;
  }
}

TEST(ExecuteGate, RowParallelEqualsPerRowExecution) {
  ArrayState a(77, 4), b(77, 4);
  for (std::size_t r = 0; r < 77; ++r) {
    a.set(r, 0, r % 3 == 0);
    a.set(r, 1, r % 5 == 0);
    b.set(r, 0, r % 3 == 0);
    b.set(r, 1, r % 5 == 0);
  }
  NoFaults none;
  const GateOp op = GateOp::make(GateKind::Nor2_2, {0, 1}, {2, 3});
  row_parallel_execute(a, op, none);
  for (std::size_t r = 0; r < 77; ++r) {
    GateOp single = op;
    single.row = r;
    execute_gate(b, single, none);
  }
  for (std::size_t r = 0; r < 77; ++r)
    for (Column c = 0; c < 4; ++c) EXPECT_EQ(a.get(r, c), b.get(r, c));
}

TEST(ExecuteGate, DisabledSwitchInsideSpanConflicts) {
  ArrayState a(1, 8, {4});
  NoFaults none;
  const GateOp across = GateOp::make(GateKind::Nor2_1, {1, 2}, {6});
  EXPECT_THROW(execute_gate(a, across, none), ScheduleConflict);
  a.set_switch(0, true);
  EXPECT_NO_THROW(execute_gate(a, across, none));
  a.set_switch(0, false);
  EXPECT_NO_THROW(execute_gate(a, GateOp::make(GateKind::Copy, {5}, {6}), none));
}

TEST(ExecuteGate, OutOfBoundsColumnThrows) {
  ArrayState a(1, 4);
  NoFaults none;
  EXPECT_THROW(execute_gate(a, GateOp::make(GateKind::Copy, {0}, {4}), none), BoundsError);
  GateOp bad_row = GateOp::make(GateKind::Copy, {0}, {1});
  bad_row.row = 1;
  EXPECT_THROW(execute_gate(a, bad_row, none), BoundsError);
}

TEST(Faults, ZeroProbabilityNeverFlips) {
  ArrayState a(500, 3);
  BernoulliFaults f(ErrorModel{0.0, 1});
  const auto trace = row_parallel_execute(a, GateOp::make(GateKind::Nor2_1, {0, 1}, {2}), f);
  EXPECT_TRUE(trace.empty());
}

TEST(Faults, ProbabilityOneFlipsEveryWrite) {
  ArrayState a(70, 4);
  BernoulliFaults f(ErrorModel{1.0, 3});
  const auto trace = row_parallel_execute(a, GateOp::make(GateKind::Nor2_2, {0, 1}, {2, 3}), f);
  EXPECT_EQ(trace.size(), 140u);
  for (std::size_t r = 0; r < 70; ++r) {
    EXPECT_FALSE(a.get(r, 2));  // NOR(0,0) = 1, flipped
    EXPECT_FALSE(a.get(r, 3));
  }
}

TEST(Faults, FlipRateConvergesToP) {
  constexpr std::size_t rows = 1000, reps = 200;
  constexpr double p = 0.01;
  ArrayState a(rows, 3);
  BernoulliFaults f(ErrorModel{p, 42});
  std::size_t flips = 0;
  for (std::size_t i = 0; i < reps; ++i) {
    flips += row_parallel_execute(a, GateOp::make(GateKind::Nor2_1, {0, 1}, {2}), f).size();
  }
  const double n = static_cast<double>(rows * reps);
  const double rate = static_cast<double>(flips) / n;
  EXPECT_NEAR(rate, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Faults, SameSeedSameTrace) {
  auto run_once = [] {
    ArrayState a(1000, 3);
    BernoulliFaults f(ErrorModel{0.5, 7});
    return row_parallel_execute(a, GateOp::make(GateKind::Nor2_1, {0, 1}, {2}), f);
  };
  const auto t1 = run_once();
  EXPECT_EQ(t1, run_once());
  EXPECT_GT(t1.size(), 400u);
  EXPECT_LT(t1.size(), 600u);
}

TEST(Faults, DualOutputsDrawIndependently) {
  // Each output is its own written cell: p=0.5 must produce mixed outcomes.
  ArrayState a(4096, 4);
  BernoulliFaults f(ErrorModel{0.5, 11});
  row_parallel_execute(a, GateOp::make(GateKind::Nor2_2, {0, 1}, {2, 3}), f);
  std::size_t differ = 0;
  for (std::size_t r = 0; r < 4096; ++r) differ += a.get(r, 2) != a.get(r, 3);
  EXPECT_GT(differ, 1700u);
  EXPECT_LT(differ, 2400u);
}

TEST(Faults, ForcedFaultsHitWriteIndices) {
  // Write order: column by column, ascending row.
  ArrayState a(3, 4);
  ForcedFaults f({1, 4});
  const auto trace = row_parallel_execute(a, GateOp::make(GateKind::Nor2_2, {0, 1}, {2, 3}), f);
  ASSERT_EQ(trace.size(), 2u);
  EXPECT_EQ(trace[0], (Flip{1, 2}));
  EXPECT_EQ(trace[1], (Flip{1, 3}));
  EXPECT_EQ(f.cells_seen(), 6u);
  EXPECT_FALSE(a.get(1, 2));
  EXPECT_TRUE(a.get(0, 2));
}

TEST(ErrorModel, ValidatesProbability) {
  EXPECT_THROW(BernoulliFaults(ErrorModel{-0.1, 0}), ConfigError);
  EXPECT_THROW(BernoulliFaults(ErrorModel{1.5, 0}), ConfigError);
}

TEST(CycleExecutor, DisjointPartitionsShareACycle) {
  ArrayState a(2, 12, {4, 8});
  NoFaults none;
  CycleExecutor ex(a, none);
  const GateOp left = GateOp::make(GateKind::Nor2_1, {0, 1}, {2});
  const GateOp right = GateOp::make(GateKind::Copy, {9}, {10});
  std::vector<GateOp> cycle = {left, right};
  ex.begin_cycle(cycle);
  EXPECT_NO_THROW(ex.issue(left));
  EXPECT_NO_THROW(ex.issue(right));
}

TEST(CycleExecutor, OverlappingPartitionsConflict) {
  ArrayState a(2, 12, {4, 8});
  NoFaults none;
  CycleExecutor ex(a, none);
  const GateOp wide = GateOp::make(GateKind::Nor2_1, {1, 5}, {6});
  const GateOp mid = GateOp::make(GateKind::Copy, {7}, {5});
  std::vector<GateOp> cycle = {wide, mid};
  ex.begin_cycle(cycle);
  ex.issue(wide);
  EXPECT_THROW(ex.issue(mid), ScheduleConflict);
}

TEST(CycleExecutor, SwitchesCloseBetweenCycles) {
  ArrayState a(1, 12, {4, 8});
  NoFaults none;
  CycleExecutor ex(a, none);
  const GateOp wide = GateOp::make(GateKind::Nor2_1, {1, 5}, {6});
  std::vector<GateOp> c1 = {wide};
  ex.begin_cycle(c1);
  EXPECT_TRUE(a.switch_enabled(0));
  EXPECT_FALSE(a.switch_enabled(1));
  ex.begin_cycle();
  EXPECT_FALSE(a.switch_enabled(0));
  EXPECT_THROW(ex.issue(wide), ScheduleConflict);
}

TEST(CycleExecutor, DifferentRowsMayShareAPartition) {
  ArrayState a(2, 4);
  NoFaults none;
  CycleExecutor ex(a, none);
  GateOp r0 = GateOp::make(GateKind::Copy, {0}, {1});
  GateOp r1 = r0;
  r1.row = 1;
  ex.begin_cycle();
  ex.issue_in_row(r0);
  EXPECT_NO_THROW(ex.issue_in_row(r1));
  EXPECT_THROW(ex.issue(r0), ScheduleConflict);
}

}  // namespace
}  // namespace pimecc
