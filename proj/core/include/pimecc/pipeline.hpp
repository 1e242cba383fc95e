#pragma once

// Row-wise error detection (single running parity) and correction (Hamming
// parity vector) pipelines: column layout, planning, execution and final
// resolution.
//
// Column layout, left to right:
//
//   [L0 anchor][L1]...[LB] [compute: inputs | one column per gate] [RB]...[R1][R0 anchor]
//
// Block 0 on each side is the anchor: it holds the initial (and, after a
// reclamation, the carried-over) parity and is never reset. Fill blocks
// 1..B are used farthest-first, moving toward the compute columns, one
// implication per block. Every block edge is a partition boundary.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pimecc/array.hpp"
#include "pimecc/gates.hpp"
#include "pimecc/hamming.hpp"
#include "pimecc/netlist.hpp"
#include "pimecc/scheduler.hpp"

namespace pimecc {

enum class PipelineMode { Baseline, Detection, Correction };
enum class Side : std::uint8_t { Left = 0, Right = 1 };

std::string_view to_string(PipelineMode mode);
std::string_view to_string(Side side);

struct ArrayGeometry {
  std::size_t rows = 1;
  std::size_t max_columns = 0;  // 0: unlimited
};

struct PipelineOptions {
  std::size_t R = 0;                       // reclamations per side
  XorVariant xor_variant = XorVariant::TwoStep;
  bool emit_reset = true;                   // bulk RESET during reclamation
};

/// Fill blocks per side: ceil(ceil(G/2) / (R+1)). Throws std::invalid_argument
/// when G == 0.
std::size_t required_blocks(std::size_t gate_count, std::size_t R);
/// Fill blocks for an explicit number of implications on the busier side.
std::size_t blocks_for_implications(std::size_t implications, std::size_t R);

struct DataLayout {
  PipelineMode mode = PipelineMode::Baseline;
  std::size_t rows = 1;
  std::size_t input_count = 0;
  std::size_t gate_count = 0;
  ColumnSpan compute;                     // inputs then gate outputs
  std::vector<ColumnSpan> left_blocks;    // index 0 = farthest (anchor)
  std::vector<ColumnSpan> right_blocks;   // index 0 = farthest (anchor)
  std::size_t block_width = 0;
  std::size_t fill_blocks = 0;            // B
  std::optional<HammingCode> code;        // correction mode only
  std::vector<std::size_t> positions;     // data position per gate (correction)
  std::size_t total_columns = 0;

  std::size_t parity_bits() const { return code ? code->parity_bits() : 1; }
  std::size_t blocks_per_side() const { return left_blocks.size(); }
  std::size_t compute_columns() const { return compute.width(); }
  std::size_t parity_columns() const { return 2 * blocks_per_side() * block_width; }

  Column input_column(std::size_t i) const { return compute.lo + static_cast<Column>(i); }
  Column gate_column(std::size_t g) const {
    return compute.lo + static_cast<Column>(input_count + g);
  }
  Column signal_column(SignalId s) const { return compute.lo + s; }

  const ColumnSpan& block(Side side, std::size_t b) const;
  Column x_cell(Side side, std::size_t b) const { return block(side, b).lo; }
  Column s1_cell(Side side, std::size_t b) const { return block(side, b).lo + 1; }
  Column s2_cell(Side side, std::size_t b) const { return block(side, b).lo + 2; }
  Column p_cell(Side side, std::size_t b, std::size_t i = 0) const {
    return block(side, b).lo + 3 + static_cast<Column>(i);
  }

  std::vector<Column> partition_boundaries() const;
};

/// Builds the layout. Throws CapacityError when the geometry is too narrow
/// and CodeError when an annotated position is outside the code.
DataLayout make_layout(const NorNetlist& netlist, PipelineMode mode,
                       const std::optional<HammingCode>& code, std::size_t R,
                       const ArrayGeometry& geometry);

/// Side receiving gate g's implication. Detection alternates every gate,
/// correction every pair of gates.
Side side_of(PipelineMode mode, std::size_t gate);

struct ReallocationEvent {
  std::size_t cycle = 0;       // cycle of the bulk reset (last copy if no reset)
  Side side = Side::Left;
  std::size_t first_op = 0;    // program index of the first copy
  std::size_t last_op = 0;     // program index of the reset (or last copy)
  std::size_t gates_before = 0;  // implications absorbed on this side so far
  std::size_t cost_cycles = 0;   // drain + copies + reset, as charged
};

struct Implication {
  std::size_t gate = 0;
  Side side = Side::Left;
  std::size_t block = 0;
  std::size_t compute_op = 0;
  std::vector<std::size_t> update_op;  // per parity bit: op that writes the new p_i
};

/// The cell holding parity bit `parity` of `side` changes to `column` when
/// op `op` completes.
struct ParityMove {
  std::size_t op = 0;
  Side side = Side::Left;
  std::size_t parity = 0;
  Column column = 0;
};

struct PipelineSchedule {
  PipelineMode mode = PipelineMode::Baseline;
  std::vector<GateOp> ops;                       // program order; cycle assigned
  std::vector<std::vector<std::size_t>> cycles;  // op indices per cycle
  std::vector<ReallocationEvent> reallocation_events;
  std::vector<Implication> implications;
  std::vector<ParityMove> parity_moves;
  std::vector<Column> final_parity;              // combined P_left ^ P_right cells
  std::vector<Column> last_left_parity;
  std::vector<Column> last_right_parity;
  std::size_t finalize_first_op = 0;

  std::size_t latency() const { return cycles.size(); }
  std::vector<std::size_t> issued_per_cycle() const;
  std::vector<GateOp> cycle_ops(std::size_t cycle) const;
  std::size_t events_on(Side side) const;
  std::size_t finalize_cycle() const;
};

/// Unprotected execution: one NOR2_1 per gate in the compute columns.
PipelineSchedule plan_baseline(const NorNetlist& netlist, const DataLayout& layout);
PipelineSchedule plan_detection(const NorNetlist& netlist, const DataLayout& layout,
                                const PipelineOptions& options = {});
PipelineSchedule plan_correction(const NorNetlist& netlist, const DataLayout& layout,
                                 const PipelineOptions& options = {});

/// Layout plus schedule in one call.
struct Plan {
  DataLayout layout;
  PipelineSchedule schedule;
};
Plan plan(const NorNetlist& netlist, PipelineMode mode, const std::optional<HammingCode>& code,
          const ArrayGeometry& geometry, const PipelineOptions& options = {});

/// Cycles charged to one reclamation: drain + copied parity bits + reset.
std::size_t reclaim_cost(std::size_t parity_bits, std::size_t drain_cycles = 2,
                         std::size_t reset_cycles = 1);

/// One line per cycle: ops separated by ';', each `KIND@row[in,..->out,..]`.
/// RESET prints its outputs as `lo..hi`.
std::string dump_schedule(const PipelineSchedule& schedule);

/// Partition and dependency legality of the cycle assignment.
std::vector<std::string> validate_schedule(const PipelineSchedule& schedule,
                                           const DataLayout& layout);

using CycleObserver = std::function<void(std::size_t cycle, const ArrayState& state)>;

struct RunOptions {
  ErrorModel errors;
  FaultSource* faults = nullptr;  // overrides `errors` when set
  CycleObserver observer;         // called after every cycle
};

struct PipelineOutcome {
  PipelineMode mode = PipelineMode::Baseline;
  std::size_t rows = 0;
  std::vector<Bits> final_data;     // netlist outputs per row, after correction
  std::vector<Bits> raw_data;       // netlist outputs per row, before correction
  std::vector<std::uint8_t> p_init;          // detection: parity of compute columns at start
  std::vector<std::uint8_t> compute_parity;  // detection: parity of compute columns at end
  std::vector<Bits> p_left;                  // per row, one bit per parity
  std::vector<Bits> p_right;
  std::vector<Bits> combined;                // in-array P_left ^ P_right
  std::vector<std::uint8_t> detected;
  std::vector<std::optional<std::size_t>> corrected_position;
  std::vector<std::uint8_t> uncorrectable;
  std::size_t replay_ops = 0;       // gates re-executed by correction
  FaultTrace fault_trace;
  ArrayState state;
};

/// Loads inputs, executes the schedule cycle by cycle and resolves the
/// outcome (detection flags or corrections). inputs[r] is row r's input
/// assignment; its size must equal the layout's row count.
PipelineOutcome run(const PipelineSchedule& schedule, const DataLayout& layout,
                    const NorNetlist& netlist, std::span<const Bits> inputs,
                    const RunOptions& options = {});

/// detected[r] = P_init ^ (P_left ^ P_right) != parity of the final compute
/// columns. Also stored in the outcome.
std::vector<std::uint8_t> finalize_detection(PipelineOutcome& outcome);

/// Folds gate outputs onto data positions, forms the codeword with the
/// combined parity vector and decodes it. A syndrome naming a data position
/// re-executes the gates mapped there and everything downstream of them;
/// a syndrome naming a parity position leaves the data alone; an
/// unrealizable syndrome flags the row.
void finalize_correction(PipelineOutcome& outcome, const DataLayout& layout,
                         const NorNetlist& netlist, FaultSource& faults);

/// XOR of the gate outputs mapped to each data position, per row.
Bits fold_data(const ArrayState& state, const DataLayout& layout, std::size_t row);

}  // namespace pimecc
