#include "pimecc/pipeline.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "pimecc/errors.hpp"

namespace pimecc {

std::string_view to_string(PipelineMode mode) {
  switch (mode) {
    case PipelineMode::Baseline: return "baseline";
    case PipelineMode::Detection: return "detection";
    case PipelineMode::Correction: return "correction";
  }
  return "?";
}

std::string_view to_string(Side side) { return side == Side::Left ? "left" : "right"; }

std::size_t blocks_for_implications(std::size_t implications, std::size_t R) {
  if (implications == 0) return 0;
  return (implications + R) / (R + 1);
}

std::size_t required_blocks(std::size_t gate_count, std::size_t R) {
  if (gate_count == 0) throw std::invalid_argument("gate count must be at least 1");
  return blocks_for_implications((gate_count + 1) / 2, R);
}

std::size_t reclaim_cost(std::size_t parity_bits, std::size_t drain_cycles,
                         std::size_t reset_cycles) {
  return drain_cycles + parity_bits + reset_cycles;
}

Side side_of(PipelineMode mode, std::size_t gate) {
  if (mode == PipelineMode::Correction) return (gate / 2) % 2 == 0 ? Side::Left : Side::Right;
  return gate % 2 == 0 ? Side::Left : Side::Right;
}

const ColumnSpan& DataLayout::block(Side side, std::size_t b) const {
  const auto& blocks = side == Side::Left ? left_blocks : right_blocks;
  if (b >= blocks.size()) throw BoundsError("parity block index out of range");
  return blocks[b];
}

std::vector<Column> DataLayout::partition_boundaries() const {
  std::vector<Column> out;
  if (mode == PipelineMode::Baseline) return out;
  for (std::size_t b = left_blocks.size(); b-- > 1;) out.push_back(left_blocks[b].lo);
  out.push_back(compute.lo);
  out.push_back(compute.hi + 1);
  for (std::size_t b = right_blocks.size(); b-- > 1;) out.push_back(right_blocks[b].hi + 1);
  std::sort(out.begin(), out.end());
  return out;
}

DataLayout make_layout(const NorNetlist& netlist, PipelineMode mode,
                       const std::optional<HammingCode>& code, std::size_t R,
                       const ArrayGeometry& geometry) {
  if (netlist.gate_count() == 0) throw NetlistError(0, "netlist has no gates");
  if (geometry.rows == 0) throw CapacityError("array needs at least one row");
  DataLayout l;
  l.mode = mode;
  l.rows = geometry.rows;
  l.input_count = netlist.input_count();
  l.gate_count = netlist.gate_count();
  const std::size_t G = l.gate_count;
  const std::size_t compute_width = l.input_count + G;

  if (mode == PipelineMode::Baseline) {
    l.compute = {0, static_cast<Column>(compute_width - 1)};
    l.total_columns = compute_width;
  } else {
    std::size_t left = 0;
    for (std::size_t g = 0; g < G; ++g) left += side_of(mode, g) == Side::Left ? 1 : 0;
    const std::size_t busiest = std::max(left, G - left);
    if (mode == PipelineMode::Correction) {
      if (!code) throw CodeError("correction mode needs a Hamming code");
      l.code = code;
      l.block_width = 3 + code->parity_bits();
      l.positions.resize(G);
      for (std::size_t g = 0; g < G; ++g) {
        const std::size_t pos = netlist.position(g).value_or(g % code->k());
        if (pos >= code->k()) {
          throw CodeError("gate '" + netlist.name(netlist.gate_signal(g)) + "' maps to data position " +
                          std::to_string(pos) + " but the code has k=" + std::to_string(code->k()));
        }
        l.positions[g] = pos;
      }
    } else {
      l.block_width = 4;
    }
    l.fill_blocks = blocks_for_implications(busiest, R);
    const std::size_t per_side = l.fill_blocks + 1;
    const std::size_t w = l.block_width;
    for (std::size_t b = 0; b < per_side; ++b) {
      l.left_blocks.push_back({static_cast<Column>(b * w), static_cast<Column>(b * w + w - 1)});
    }
    const std::size_t lo = per_side * w;
    l.compute = {static_cast<Column>(lo), static_cast<Column>(lo + compute_width - 1)};
    const std::size_t rstart = lo + compute_width;
    for (std::size_t b = 0; b < per_side; ++b) {
      const std::size_t start = rstart + (per_side - 1 - b) * w;
      l.right_blocks.push_back({static_cast<Column>(start), static_cast<Column>(start + w - 1)});
    }
    l.total_columns = rstart + per_side * w;
  }
  if (geometry.max_columns != 0 && l.total_columns > geometry.max_columns) {
    throw CapacityError("layout needs " + std::to_string(l.total_columns) +
                        " columns but the array has " + std::to_string(geometry.max_columns));
  }
  if (l.total_columns > (std::size_t{1} << 31)) throw CapacityError("layout too wide");
  return l;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> PipelineSchedule::issued_per_cycle() const {
  std::vector<std::size_t> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(c.size());
  return out;
}

std::vector<GateOp> PipelineSchedule::cycle_ops(std::size_t cycle) const {
  std::vector<GateOp> out;
  for (std::size_t j : cycles.at(cycle)) out.push_back(ops[j]);
  return out;
}

std::size_t PipelineSchedule::events_on(Side side) const {
  return static_cast<std::size_t>(std::count_if(reallocation_events.begin(), reallocation_events.end(),
                                                [&](const auto& e) { return e.side == side; }));
}

std::size_t PipelineSchedule::finalize_cycle() const {
  if (finalize_first_op >= ops.size()) return cycles.size();
  return ops[finalize_first_op].cycle;
}

namespace {

class Planner {
 public:
  Planner(const NorNetlist& net, const DataLayout& layout, const PipelineOptions& opt)
      : net_(net), l_(layout), opt_(opt) {
    s_.mode = layout.mode;
  }

  PipelineSchedule baseline() {
    for (std::size_t g = 0; g < net_.gate_count(); ++g) {
      const auto& gate = net_.gates()[g];
      emit(GateOp::make(GateKind::Nor2_1, {l_.signal_column(gate.in1), l_.signal_column(gate.in2)},
                        {l_.gate_column(g)}, OpRole::Compute));
    }
    s_.finalize_first_op = s_.ops.size();
    return finish();
  }

  PipelineSchedule protected_run() {
    const std::size_t r = l_.parity_bits();
    for (std::size_t g = 0; g < net_.gate_count(); ++g) {
      const Side side = side_of(l_.mode, g);
      SideState& st = state(side);
      if (st.next_block > l_.fill_blocks) reclaim(side);
      const std::size_t b = st.next_block++;
      const std::size_t prev = st.last_block;

      const auto& gate = net_.gates()[g];
      Implication imp;
      imp.gate = g;
      imp.side = side;
      imp.block = b;
      imp.compute_op = emit(GateOp::make(
          GateKind::Nor2_2, {l_.signal_column(gate.in1), l_.signal_column(gate.in2)},
          {l_.gate_column(g), l_.x_cell(side, b)}, OpRole::Compute));

      for (std::size_t i = 0; i < r; ++i) {
        const bool affected = !l_.code || l_.code->a(l_.positions[g], i);
        std::size_t last = 0;
        if (affected) {
          const XorCells cells{l_.x_cell(side, b), l_.p_cell(side, prev, i), l_.s1_cell(side, b),
                               l_.s2_cell(side, b), l_.p_cell(side, b, i)};
          for (auto& op : xor_macro(cells, opt_.xor_variant, OpRole::EccUpdate)) last = emit(std::move(op));
        } else {
          last = emit(GateOp::make(GateKind::Copy, {l_.p_cell(side, prev, i)}, {l_.p_cell(side, b, i)},
                                   OpRole::EccUpdate));
        }
        imp.update_op.push_back(last);
        s_.parity_moves.push_back({last, side, i, l_.p_cell(side, b, i)});
      }
      s_.implications.push_back(std::move(imp));
      st.last_block = b;
      ++st.absorbed;
    }
    finalize();
    return finish();
  }

 private:
  struct SideState {
    std::size_t next_block = 1;
    std::size_t last_block = 0;
    std::size_t absorbed = 0;
  };

  SideState& state(Side s) { return sides_[static_cast<std::size_t>(s)]; }

  std::size_t emit(GateOp op) {
    op.seq = s_.ops.size();
    s_.ops.push_back(std::move(op));
    return s_.ops.size() - 1;
  }

  void reclaim(Side side) {
    SideState& st = state(side);
    const std::size_t r = l_.parity_bits();
    ReallocationEvent ev;
    ev.side = side;
    ev.gates_before = st.absorbed;
    ev.cost_cycles = reclaim_cost(r, 2, opt_.emit_reset ? 1 : 0);
    for (std::size_t i = 0; i < r; ++i) {
      const std::size_t j = emit(GateOp::make(GateKind::Copy, {l_.p_cell(side, st.last_block, i)},
                                              {l_.p_cell(side, 0, i)}, OpRole::Reclaim));
      if (i == 0) ev.first_op = j;
      ev.last_op = j;
      s_.parity_moves.push_back({j, side, i, l_.p_cell(side, 0, i)});
    }
    if (opt_.emit_reset) {
      const ColumnSpan near = l_.block(side, l_.fill_blocks);
      const ColumnSpan far = l_.block(side, 1);
      const ColumnSpan span{std::min(near.lo, far.lo), std::max(near.hi, far.hi)};
      ev.last_op = emit(GateOp::reset(span, OpRole::Reclaim));
    }
    s_.reallocation_events.push_back(ev);
    st.next_block = 1;
    st.last_block = 0;
  }

  void finalize() {
    const std::size_t r = l_.parity_bits();
    const std::size_t bl = state(Side::Left).last_block;
    const std::size_t br = state(Side::Right).last_block;
    const std::size_t f = bl != 0 ? 0 : 1;
    s_.finalize_first_op = s_.ops.size();
    for (std::size_t i = 0; i < r; ++i) {
      const Column pl = l_.p_cell(Side::Left, bl, i);
      const Column pr = l_.p_cell(Side::Right, br, i);
      s_.last_left_parity.push_back(pl);
      s_.last_right_parity.push_back(pr);
      const XorCells cells{pl, pr, l_.s1_cell(Side::Left, f), l_.s2_cell(Side::Left, f),
                           l_.p_cell(Side::Left, f, i)};
      for (auto& op : xor_macro(cells, opt_.xor_variant, OpRole::Finalize)) emit(std::move(op));
      s_.final_parity.push_back(cells.out);
    }
  }

  PipelineSchedule finish() {
    s_.cycles = list_schedule(s_.ops, PartitionMap(l_.partition_boundaries()));
    for (auto& ev : s_.reallocation_events) ev.cycle = s_.ops[ev.last_op].cycle;
    return std::move(s_);
  }

  const NorNetlist& net_;
  const DataLayout& l_;
  PipelineOptions opt_;
  PipelineSchedule s_;
  SideState sides_[2];
};

void check_layout(const NorNetlist& net, const DataLayout& layout, PipelineMode mode) {
  if (layout.mode != mode) throw ConfigError("layout was built for a different pipeline mode");
  if (layout.gate_count != net.gate_count() || layout.input_count != net.input_count()) {
    throw ConfigError("layout does not match the netlist");
  }
}

}  // namespace

PipelineSchedule plan_baseline(const NorNetlist& netlist, const DataLayout& layout) {
  check_layout(netlist, layout, PipelineMode::Baseline);
  return Planner(netlist, layout, {}).baseline();
}

PipelineSchedule plan_detection(const NorNetlist& netlist, const DataLayout& layout,
                                const PipelineOptions& options) {
  check_layout(netlist, layout, PipelineMode::Detection);
  return Planner(netlist, layout, options).protected_run();
}

PipelineSchedule plan_correction(const NorNetlist& netlist, const DataLayout& layout,
                                 const PipelineOptions& options) {
  check_layout(netlist, layout, PipelineMode::Correction);
  return Planner(netlist, layout, options).protected_run();
}

Plan plan(const NorNetlist& netlist, PipelineMode mode, const std::optional<HammingCode>& code,
          const ArrayGeometry& geometry, const PipelineOptions& options) {
  Plan p;
  p.layout = make_layout(netlist, mode, code, options.R, geometry);
  switch (mode) {
    case PipelineMode::Baseline: p.schedule = plan_baseline(netlist, p.layout); break;
    case PipelineMode::Detection: p.schedule = plan_detection(netlist, p.layout, options); break;
    case PipelineMode::Correction: p.schedule = plan_correction(netlist, p.layout, options); break;
  }
  return p;
}

std::string dump_schedule(const PipelineSchedule& schedule) {
  std::ostringstream os;
  auto list = [&](const std::vector<Column>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  };
  for (const auto& cycle : schedule.cycles) {
    bool first = true;
    for (std::size_t j : cycle) {
      const GateOp& op = schedule.ops[j];
      os << (first ? "" : ";") << to_string(op.kind) << '@' << op.row << '[';
      first = false;
      list(op.inputs);
      os << "->";
      if (op.kind == GateKind::Reset) {
        os << op.span.lo << ".." << op.span.hi;
      } else {
        list(op.outputs);
      }
      os << ']';
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> validate_schedule(const PipelineSchedule& schedule,
                                           const DataLayout& layout) {
  auto problems = validate_cycles(schedule.ops, PartitionMap(layout.partition_boundaries()));
  for (std::size_t c = 0; c < schedule.cycles.size(); ++c) {
    for (std::size_t j : schedule.cycles[c]) {
      if (schedule.ops[j].cycle != c) {
        problems.push_back("op " + std::to_string(j) + " listed in cycle " + std::to_string(c) +
                           " but assigned cycle " + std::to_string(schedule.ops[j].cycle));
      }
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------

namespace {

Bits read_outputs(const ArrayState& state, const DataLayout& layout, const NorNetlist& net,
                  std::size_t row) {
  Bits out;
  out.reserve(net.outputs().size());
  for (SignalId s : net.outputs()) out.push_back(state.get(row, layout.signal_column(s)) ? 1 : 0);
  return out;
}

std::uint8_t compute_parity(const ArrayState& state, const DataLayout& layout, std::size_t row) {
  std::uint8_t p = 0;
  for (Column c = layout.compute.lo; c <= layout.compute.hi; ++c) p ^= state.get(row, c) ? 1 : 0;
  return p;
}

}  // namespace

Bits fold_data(const ArrayState& state, const DataLayout& layout, std::size_t row) {
  if (!layout.code) throw CodeError("data folding needs a correction layout");
  Bits d(layout.code->k(), 0);
  for (std::size_t g = 0; g < layout.gate_count; ++g) {
    d[layout.positions[g]] ^= state.get(row, layout.gate_column(g)) ? 1 : 0;
  }
  return d;
}

PipelineOutcome run(const PipelineSchedule& schedule, const DataLayout& layout,
                    const NorNetlist& netlist, std::span<const Bits> inputs,
                    const RunOptions& options) {
  if (inputs.size() != layout.rows) {
    throw ConfigError("expected inputs for " + std::to_string(layout.rows) + " rows, got " +
                      std::to_string(inputs.size()));
  }
  PipelineOutcome out;
  out.mode = schedule.mode;
  out.rows = layout.rows;
  out.state = ArrayState(layout.rows, layout.total_columns, layout.partition_boundaries());
  ArrayState& state = out.state;
  for (std::size_t r = 0; r < layout.rows; ++r) {
    if (inputs[r].size() != layout.input_count) {
      throw NetlistError(0, "row " + std::to_string(r) + " has " + std::to_string(inputs[r].size()) +
                                " input values, expected " + std::to_string(layout.input_count));
    }
    for (std::size_t i = 0; i < layout.input_count; ++i) {
      state.set(r, layout.input_column(i), inputs[r][i] & 1u);
    }
  }
  if (schedule.mode == PipelineMode::Detection) {
    out.p_init.resize(layout.rows);
    for (std::size_t r = 0; r < layout.rows; ++r) out.p_init[r] = compute_parity(state, layout, r);
  }

  std::optional<BernoulliFaults> own;
  FaultSource* faults = options.faults;
  if (faults == nullptr) {
    own.emplace(options.errors);
    faults = &*own;
  }

  CycleExecutor exec(state, *faults);
  for (std::size_t c = 0; c < schedule.cycles.size(); ++c) {
    exec.begin_cycle();
    for (std::size_t j : schedule.cycles[c]) exec.enable_span(schedule.ops[j]);
    for (std::size_t j : schedule.cycles[c]) {
      FaultTrace t = exec.issue(schedule.ops[j]);
      out.fault_trace.insert(out.fault_trace.end(), t.begin(), t.end());
    }
    if (options.observer) options.observer(c, state);
  }
  exec.begin_cycle();

  const std::size_t r_bits = schedule.final_parity.size();
  out.raw_data.resize(layout.rows);
  out.p_left.assign(layout.rows, Bits(r_bits));
  out.p_right.assign(layout.rows, Bits(r_bits));
  out.combined.assign(layout.rows, Bits(r_bits));
  out.detected.assign(layout.rows, 0);
  out.corrected_position.assign(layout.rows, std::nullopt);
  out.uncorrectable.assign(layout.rows, 0);
  for (std::size_t r = 0; r < layout.rows; ++r) {
    out.raw_data[r] = read_outputs(state, layout, netlist, r);
    for (std::size_t i = 0; i < r_bits; ++i) {
      out.p_left[r][i] = state.get(r, schedule.last_left_parity[i]);
      out.p_right[r][i] = state.get(r, schedule.last_right_parity[i]);
      out.combined[r][i] = state.get(r, schedule.final_parity[i]);
    }
  }
  out.final_data = out.raw_data;

  if (schedule.mode == PipelineMode::Detection) {
    out.compute_parity.resize(layout.rows);
    for (std::size_t r = 0; r < layout.rows; ++r) out.compute_parity[r] = compute_parity(state, layout, r);
    finalize_detection(out);
  } else if (schedule.mode == PipelineMode::Correction) {
    finalize_correction(out, layout, netlist, *faults);
  }
  return out;
}

std::vector<std::uint8_t> finalize_detection(PipelineOutcome& outcome) {
  if (outcome.mode != PipelineMode::Detection) throw ConfigError("not a detection outcome");
  for (std::size_t r = 0; r < outcome.rows; ++r) {
    const std::uint8_t maintained = outcome.p_init[r] ^ (outcome.combined[r][0] & 1u);
    outcome.detected[r] = maintained != outcome.compute_parity[r] ? 1 : 0;
  }
  return outcome.detected;
}

void finalize_correction(PipelineOutcome& outcome, const DataLayout& layout,
                         const NorNetlist& netlist, FaultSource& faults) {
  if (outcome.mode != PipelineMode::Correction || !layout.code) {
    throw ConfigError("not a correction outcome");
  }
  const HammingCode& code = *layout.code;
  ArrayState& state = outcome.state;
  std::vector<std::uint8_t> redo;
  for (std::size_t r = 0; r < outcome.rows; ++r) {
    Bits cw = fold_data(state, layout, r);
    cw.insert(cw.end(), outcome.combined[r].begin(), outcome.combined[r].end());
    const std::uint32_t s = code.syndrome_mask(cw);
    outcome.detected[r] = s != 0 ? 1 : 0;
    if (s == 0) continue;
    const auto pos = code.position_for(s);
    if (!pos) {
      outcome.uncorrectable[r] = 1;
      continue;
    }
    outcome.corrected_position[r] = pos;
    if (*pos >= code.k()) continue;  // parity bit: data already consistent

    // Re-execute the gates folded into this position and their fan-out.
    redo.assign(layout.gate_count, 0);
    for (std::size_t g = 0; g < layout.gate_count; ++g) {
      const auto& gate = netlist.gates()[g];
      bool hit = layout.positions[g] == *pos;
      for (SignalId in : {gate.in1, gate.in2}) {
        if (!netlist.is_input(in) && redo[netlist.gate_index(in)]) hit = true;
      }
      if (!hit) continue;
      redo[g] = 1;
      const GateOp op = GateOp::make(GateKind::Nor2_1,
                                     {layout.signal_column(gate.in1), layout.signal_column(gate.in2)},
                                     {layout.gate_column(g)}, OpRole::Compute, r);
      FaultTrace t = execute_gate(state, op, faults);
      outcome.fault_trace.insert(outcome.fault_trace.end(), t.begin(), t.end());
      ++outcome.replay_ops;
    }
    outcome.final_data[r] = read_outputs(state, layout, netlist, r);
  }
}

}  // namespace pimecc
