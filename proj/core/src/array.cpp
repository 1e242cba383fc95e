#include "pimecc/array.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

#include "pimecc/errors.hpp"
#include "pimecc/gates.hpp"

namespace pimecc {

std::string_view to_string(GateKind kind) { return gate_info(kind).name; }

std::optional<GateKind> parse_gate_kind(std::string_view name) {
  for (GateKind k : kAllGateKinds) {
    if (gate_info(k).name == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(OpRole role) {
  switch (role) {
    case OpRole::Compute: return "compute";
    case OpRole::EccUpdate: return "ecc_update";
    case OpRole::Reclaim: return "reclaim";
    case OpRole::Finalize: return "finalize";
    case OpRole::Redundant: return "redundant";
  }
  return "?";
}

namespace {

ColumnSpan span_of(const std::vector<Column>& a, const std::vector<Column>& b) {
  Column lo = std::numeric_limits<Column>::max();
  Column hi = 0;
  for (Column c : a) lo = std::min(lo, c), hi = std::max(hi, c);
  for (Column c : b) lo = std::min(lo, c), hi = std::max(hi, c);
  return {lo, hi};
}

void check_arity(GateKind kind, std::size_t n_in, std::size_t n_out) {
  const auto& info = gate_info(kind);
  if (kind == GateKind::Reset) {
    if (n_in != 0 || n_out == 0) {
      throw std::invalid_argument("RESET takes no inputs and at least one output");
    }
    return;
  }
  if (n_in != info.arity_in || n_out != info.arity_out) {
    throw std::invalid_argument(std::string(info.name) + " expects " +
                                std::to_string(info.arity_in) + " inputs and " +
                                std::to_string(info.arity_out) + " outputs");
  }
}

void check_aliasing(const GateOp& op) {
  for (std::size_t i = 0; i < op.outputs.size(); ++i) {
    for (std::size_t j = i + 1; j < op.outputs.size(); ++j) {
      if (op.outputs[i] == op.outputs[j]) {
        throw std::invalid_argument("gate outputs must be distinct cells");
      }
    }
    for (Column in : op.inputs) {
      if (in == op.outputs[i]) {
        throw std::invalid_argument("gate output aliases one of its inputs");
      }
    }
  }
}

}  // namespace

GateOp GateOp::make(GateKind kind, std::vector<Column> inputs, std::vector<Column> outputs,
                    OpRole role, std::size_t row) {
  check_arity(kind, inputs.size(), outputs.size());
  GateOp op;
  op.kind = kind;
  op.row = row;
  op.span = span_of(inputs, outputs);
  op.inputs = std::move(inputs);
  op.outputs = std::move(outputs);
  op.role = role;
  check_aliasing(op);
  return op;
}

GateOp GateOp::reset(ColumnSpan columns, OpRole role, std::size_t row) {
  if (columns.hi < columns.lo) throw std::invalid_argument("empty RESET span");
  GateOp op;
  op.kind = GateKind::Reset;
  op.row = row;
  op.span = columns;
  op.role = role;
  op.outputs.reserve(columns.width());
  for (Column c = columns.lo; c <= columns.hi; ++c) op.outputs.push_back(c);
  return op;
}

// ---------------------------------------------------------------------------

ArrayState::ArrayState(std::size_t rows, std::size_t columns,
                       std::vector<Column> partition_boundaries)
    : rows_(rows),
      columns_(columns),
      words_((rows + 63) / 64),
      bits_(words_ * columns, 0),
      boundaries_(std::move(partition_boundaries)),
      switches_(boundaries_.size(), 0) {
  if (rows == 0 || columns == 0) throw BoundsError("array must have rows and columns");
  for (std::size_t i = 0; i < boundaries_.size(); ++i) {
    if (boundaries_[i] < 1 || boundaries_[i] > columns - 1) {
      throw BoundsError("partition boundary " + std::to_string(boundaries_[i]) +
                        " outside [1, columns-1]");
    }
    if (i > 0 && boundaries_[i] <= boundaries_[i - 1]) {
      throw BoundsError("partition boundaries must be strictly increasing");
    }
  }
}

bool ArrayState::get(std::size_t row, Column col) const {
  if (row >= rows_ || col >= columns_) throw BoundsError("cell out of bounds");
  return (bits_[col * words_ + row / 64] >> (row % 64)) & 1u;
}

void ArrayState::set(std::size_t row, Column col, bool value) {
  if (row >= rows_ || col >= columns_) throw BoundsError("cell out of bounds");
  auto& w = bits_[col * words_ + row / 64];
  const std::uint64_t m = std::uint64_t{1} << (row % 64);
  w = value ? (w | m) : (w & ~m);
}

std::span<std::uint64_t> ArrayState::column_words(Column col) {
  if (col >= columns_) throw BoundsError("column out of bounds");
  return {bits_.data() + static_cast<std::size_t>(col) * words_, words_};
}

std::span<const std::uint64_t> ArrayState::column_words(Column col) const {
  if (col >= columns_) throw BoundsError("column out of bounds");
  return {bits_.data() + static_cast<std::size_t>(col) * words_, words_};
}

void ArrayState::clear() { std::fill(bits_.begin(), bits_.end(), 0); }

std::size_t ArrayState::partition_of(Column col) const {
  return static_cast<std::size_t>(
      std::upper_bound(boundaries_.begin(), boundaries_.end(), col) - boundaries_.begin());
}

bool ArrayState::switch_enabled(std::size_t i) const {
  if (i >= switches_.size()) throw BoundsError("switch index out of range");
  return switches_[i] != 0;
}

void ArrayState::set_switch(std::size_t i, bool enabled) {
  if (i >= switches_.size()) throw BoundsError("switch index out of range");
  switches_[i] = enabled ? 1 : 0;
}

void ArrayState::set_all_switches(bool enabled) {
  std::fill(switches_.begin(), switches_.end(), enabled ? 1 : 0);
}

std::uint64_t ArrayState::row_mask(std::size_t w) const {
  const std::size_t rem = rows_ - w * 64;
  return rem >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << rem) - 1);
}

ArrayState set_switch(ArrayState array, std::size_t boundary_index, bool enabled) {
  array.set_switch(boundary_index, enabled);
  return array;
}

// ---------------------------------------------------------------------------

void ErrorModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("gate error probability must be in [0, 1]");
}

BernoulliFaults::BernoulliFaults(const ErrorModel& model) : p_(model.p), rng_(model.seed) {
  model.validate();
  never_ = p_ <= 0.0;
  if (!never_) redraw();
}

void BernoulliFaults::redraw() {
  if (p_ >= 1.0) {
    gap_ = 0;
    return;
  }
  std::geometric_distribution<std::uint64_t> dist(p_);
  gap_ = dist(rng_);
}

std::uint64_t BernoulliFaults::next(unsigned count) {
  if (never_) return 0;
  std::uint64_t mask = 0;
  std::uint64_t pos = 0;
  while (pos + gap_ < count) {
    pos += gap_;
    mask |= std::uint64_t{1} << pos;
    ++pos;
    redraw();
  }
  gap_ -= (count - pos);
  return mask;
}

ForcedFaults::ForcedFaults(std::vector<std::uint64_t> sites) : sites_(std::move(sites)) {
  std::sort(sites_.begin(), sites_.end());
  sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

std::uint64_t ForcedFaults::next(unsigned count) {
  std::uint64_t mask = 0;
  const std::uint64_t end = seen_ + count;
  while (cursor_ < sites_.size() && sites_[cursor_] < end) {
    mask |= std::uint64_t{1} << (sites_[cursor_] - seen_);
    ++cursor_;
  }
  seen_ = end;
  return mask;
}

// ---------------------------------------------------------------------------

namespace {

void check_op_cells(const ArrayState& array, const GateOp& op) {
  if (op.kind != GateKind::Reset) check_arity(op.kind, op.inputs.size(), op.outputs.size());
  for (Column c : op.inputs) {
    if (c >= array.columns()) throw BoundsError("input column " + std::to_string(c) + " out of bounds");
    if (!op.span.contains(c)) throw ScheduleConflict("op span does not cover its inputs");
  }
  for (Column c : op.outputs) {
    if (c >= array.columns()) throw BoundsError("output column " + std::to_string(c) + " out of bounds");
    if (!op.span.contains(c)) throw ScheduleConflict("op span does not cover its outputs");
  }
  if (op.span.hi >= array.columns()) throw BoundsError("op span out of bounds");
  if (op.kind != GateKind::Reset) check_aliasing(op);

  const std::size_t first = array.partition_of(op.span.lo);
  const std::size_t last = array.partition_of(op.span.hi);
  for (std::size_t b = first; b < last; ++b) {
    if (!array.switch_enabled(b)) {
      throw ScheduleConflict("switch " + std::to_string(b) + " inside op span is disabled");
    }
  }
}

// Gate result for one 64-row word; `in` holds the input words.
std::uint64_t gate_word(GateKind kind, const std::uint64_t* in) {
  switch (kind) {
    case GateKind::Nor2_1:
    case GateKind::Nor2_2:
      return ~(in[0] | in[1]);
    case GateKind::Thr4_1: {
      // at most one input is 1
      const std::uint64_t a = in[0], b = in[1], c = in[2], d = in[3];
      return ~((a & b) | (a & c) | (a & d) | (b & c) | (b & d) | (c & d));
    }
    case GateKind::Copy:
      return in[0];
    case GateKind::Reset:
      return 0;
  }
  return 0;
}

// Scatters the low popcount(mask) bits of `bits` onto the set positions of mask.
std::uint64_t deposit(std::uint64_t bits, std::uint64_t mask) {
  std::uint64_t out = 0;
  while (bits != 0 && mask != 0) {
    const std::uint64_t low = mask & (~mask + 1);
    if (bits & 1u) out |= low;
    bits >>= 1;
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

FaultTrace masked_execute(ArrayState& array, const GateOp& op,
                          std::span<const std::uint64_t> row_mask, FaultSource& faults) {
  check_op_cells(array, op);
  const bool preset = gate_info(op.kind).preset;
  const std::size_t words = array.words_per_column();
  if (row_mask.size() != words) throw BoundsError("row mask size mismatch");
  FaultTrace trace;

  std::uint64_t in[4] = {0, 0, 0, 0};
  for (Column out : op.outputs) {
    auto cells = array.column_words(out);
    for (std::size_t w = 0; w < words; ++w) {
      const std::uint64_t m = row_mask[w];
      if (m == 0) continue;
      for (std::size_t i = 0; i < op.inputs.size(); ++i) {
        in[i] = array.column_words(op.inputs[i])[w];
      }
      // Preset, then conditional switching per the truth function.
      std::uint64_t value = preset ? ~std::uint64_t{0} : 0;
      const std::uint64_t truth = gate_word(op.kind, in);
      value = preset ? (value & truth) : (value | truth);

      const auto count = static_cast<unsigned>(std::popcount(m));
      const std::uint64_t draw = faults.next(count);
      std::uint64_t flips = 0;
      if (draw != 0) {
        flips = (m == ~std::uint64_t{0}) ? draw : deposit(draw, m);
        value ^= flips;
      }
      cells[w] = (cells[w] & ~m) | (value & m);
      while (flips != 0) {
        const int bit = std::countr_zero(flips);
        trace.push_back({w * 64 + static_cast<std::size_t>(bit), out});
        flips &= flips - 1;
      }
    }
  }
  return trace;
}

FaultTrace execute_gate(ArrayState& array, const GateOp& op, FaultSource& faults) {
  if (op.row >= array.rows()) throw BoundsError("op row out of bounds");
  std::vector<std::uint64_t> mask(array.words_per_column(), 0);
  mask[op.row / 64] = std::uint64_t{1} << (op.row % 64);
  return masked_execute(array, op, mask, faults);
}

FaultTrace row_parallel_execute(ArrayState& array, const GateOp& op,
                                std::span<const std::size_t> rows, FaultSource& faults) {
  std::vector<std::uint64_t> mask(array.words_per_column(), 0);
  for (std::size_t r : rows) {
    if (r >= array.rows()) throw BoundsError("row out of bounds");
    mask[r / 64] |= std::uint64_t{1} << (r % 64);
  }
  return masked_execute(array, op, mask, faults);
}

FaultTrace row_parallel_execute(ArrayState& array, const GateOp& op, FaultSource& faults) {
  std::vector<std::uint64_t> mask(array.words_per_column());
  for (std::size_t w = 0; w < mask.size(); ++w) mask[w] = array.row_mask(w);
  return masked_execute(array, op, mask, faults);
}

// ---------------------------------------------------------------------------

void CycleExecutor::begin_cycle(std::span<const GateOp> ops, bool configure_switches) {
  claims_.clear();
  if (!configure_switches) return;
  for (std::size_t b : enabled_) array_.set_switch(b, false);
  enabled_.clear();
  for (const GateOp& op : ops) enable_span(op);
}

void CycleExecutor::enable_span(const GateOp& op) {
  const std::size_t first = array_.partition_of(op.span.lo);
  const std::size_t last = array_.partition_of(op.span.hi);
  for (std::size_t b = first; b < last; ++b) {
    if (!array_.switch_enabled(b)) {
      array_.set_switch(b, true);
      enabled_.push_back(b);
    }
  }
}

void CycleExecutor::claim(const GateOp& op, std::size_t row_key) {
  constexpr std::size_t kAllRows = std::numeric_limits<std::size_t>::max();
  const std::size_t first = array_.partition_of(op.span.lo);
  const std::size_t last = array_.partition_of(op.span.hi);
  for (const Claim& c : claims_) {
    const bool same_rows = c.row_key == row_key || c.row_key == kAllRows || row_key == kAllRows;
    if (same_rows && first <= c.last && c.first <= last) {
      throw ScheduleConflict("partitions " + std::to_string(first) + ".." +
                             std::to_string(last) + " already occupied this cycle");
    }
  }
  claims_.push_back({row_key, first, last});
}

FaultTrace CycleExecutor::issue(const GateOp& op) {
  claim(op, std::numeric_limits<std::size_t>::max());
  if (all_rows_.size() != array_.words_per_column()) {
    all_rows_.resize(array_.words_per_column());
    for (std::size_t w = 0; w < all_rows_.size(); ++w) all_rows_[w] = array_.row_mask(w);
  }
  return masked_execute(array_, op, all_rows_, faults_);
}

FaultTrace CycleExecutor::issue_in_row(const GateOp& op) {
  claim(op, op.row);
  return execute_gate(array_, op, faults_);
}

}  // namespace pimecc
