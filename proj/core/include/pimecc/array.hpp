#pragma once

// Crossbar model: a rows x columns grid of binary cells, partition switches
// along the logic lines, and stateful gate execution with per-written-cell
// fault injection.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace pimecc {

using Column = std::uint32_t;

enum class GateKind : std::uint8_t { Nor2_1, Nor2_2, Thr4_1, Copy, Reset };

inline constexpr GateKind kAllGateKinds[] = {GateKind::Nor2_1, GateKind::Nor2_2,
                                             GateKind::Thr4_1, GateKind::Copy,
                                             GateKind::Reset};

std::string_view to_string(GateKind kind);
std::optional<GateKind> parse_gate_kind(std::string_view name);

/// What an operation is for. Used by cost accounting to split compute from
/// error-correction work; it has no effect on execution.
enum class OpRole : std::uint8_t { Compute, EccUpdate, Reclaim, Finalize, Redundant };

std::string_view to_string(OpRole role);

/// Inclusive column interval.
struct ColumnSpan {
  Column lo = 0;
  Column hi = 0;

  bool contains(Column c) const { return lo <= c && c <= hi; }
  std::size_t width() const { return static_cast<std::size_t>(hi - lo) + 1; }
  friend bool operator==(const ColumnSpan&, const ColumnSpan&) = default;
};

/// One stateful-logic operation confined to a single row. Row-parallel
/// broadcast is expressed by executing the same op over a row set.
struct GateOp {
  GateKind kind = GateKind::Nor2_1;
  std::size_t row = 0;
  std::vector<Column> inputs;
  std::vector<Column> outputs;  // RESET lists every cleared column
  ColumnSpan span;
  std::size_t cycle = 0;
  OpRole role = OpRole::Compute;
  std::size_t seq = 0;  // program-order index assigned by planners

  /// Builds an op and derives its span. Throws std::invalid_argument on an
  /// arity mismatch or when an output aliases another cell of the op.
  static GateOp make(GateKind kind, std::vector<Column> inputs,
                     std::vector<Column> outputs, OpRole role = OpRole::Compute,
                     std::size_t row = 0);
  static GateOp reset(ColumnSpan columns, OpRole role = OpRole::Reclaim,
                      std::size_t row = 0);
};

/// Bit grid stored column-major as 64-row words so that row-parallel gates
/// are word operations.
class ArrayState {
 public:
  ArrayState() = default;
  ArrayState(std::size_t rows, std::size_t columns,
             std::vector<Column> partition_boundaries = {});

  std::size_t rows() const noexcept { return rows_; }
  std::size_t columns() const noexcept { return columns_; }
  std::size_t words_per_column() const noexcept { return words_; }

  bool get(std::size_t row, Column col) const;
  void set(std::size_t row, Column col, bool value);

  std::span<std::uint64_t> column_words(Column col);
  std::span<const std::uint64_t> column_words(Column col) const;

  /// Zero every cell; switch states are left untouched.
  void clear();

  const std::vector<Column>& partition_boundaries() const noexcept { return boundaries_; }
  std::size_t partition_count() const noexcept { return boundaries_.size() + 1; }
  std::size_t partition_of(Column col) const;
  bool switch_enabled(std::size_t boundary_index) const;
  void set_switch(std::size_t boundary_index, bool enabled);
  void set_all_switches(bool enabled);
  const std::vector<std::uint8_t>& switch_states() const noexcept { return switches_; }

  /// Valid-row mask for word `w` (the last word may be partial).
  std::uint64_t row_mask(std::size_t w) const;

 private:
  std::size_t rows_ = 0;
  std::size_t columns_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<Column> boundaries_;
  std::vector<std::uint8_t> switches_;
};

/// Functional form of set_switch: returns the updated array.
ArrayState set_switch(ArrayState array, std::size_t boundary_index, bool enabled);

struct ErrorModel {
  double p = 0.0;  // probability that a written cell ends up flipped
  std::uint64_t seed = 0;
  bool per_output_independent = true;

  void validate() const;
};

/// Source of flip decisions for written cells, consumed in write order
/// (output column by output column, ascending row within a column).
class FaultSource {
 public:
  virtual ~FaultSource() = default;
  /// Flip mask for the next `count` (<= 64) written cells, lowest bit first.
  virtual std::uint64_t next(unsigned count) = 0;
};

class NoFaults final : public FaultSource {
 public:
  std::uint64_t next(unsigned) override { return 0; }
};

/// Independent Bernoulli(p) flip per written cell. Draws the gap to the next
/// flip from a geometric distribution, which is equivalent in law and cheap
/// at small p.
class BernoulliFaults final : public FaultSource {
 public:
  explicit BernoulliFaults(const ErrorModel& model);
  std::uint64_t next(unsigned count) override;

 private:
  void redraw();

  double p_;
  std::mt19937_64 rng_;
  std::uint64_t gap_ = 0;  // cells to skip before the next flip
  bool never_ = false;
};

/// Flips exactly the listed write indices (0-based count of written cells).
class ForcedFaults final : public FaultSource {
 public:
  explicit ForcedFaults(std::vector<std::uint64_t> sites);
  std::uint64_t next(unsigned count) override;
  std::uint64_t cells_seen() const noexcept { return seen_; }

 private:
  std::vector<std::uint64_t> sites_;
  std::size_t cursor_ = 0;
  std::uint64_t seen_ = 0;
};

/// Counts written cells without flipping any.
class CountingFaults final : public FaultSource {
 public:
  std::uint64_t next(unsigned count) override {
    seen_ += count;
    return 0;
  }
  std::uint64_t cells_seen() const noexcept { return seen_; }

 private:
  std::uint64_t seen_ = 0;
};

struct Flip {
  std::size_t row = 0;
  Column column = 0;
  friend bool operator==(const Flip&, const Flip&) = default;
};
using FaultTrace = std::vector<Flip>;

/// Executes `op` in its own row: outputs are preset, then switched per the
/// gate's truth function, then each written cell is flipped per `faults`.
/// Throws BoundsError for out-of-range cells and ScheduleConflict when a
/// partition boundary inside the span has its switch disabled.
FaultTrace execute_gate(ArrayState& array, const GateOp& op, FaultSource& faults);

/// Executes `op` in every row listed in `rows` (ascending, unique) as a single
/// row-parallel step. Each row draws its own faults.
FaultTrace row_parallel_execute(ArrayState& array, const GateOp& op,
                                std::span<const std::size_t> rows, FaultSource& faults);

/// Row-parallel execution over the rows whose bits are set in `row_mask`
/// (one word per 64 rows).
FaultTrace masked_execute(ArrayState& array, const GateOp& op,
                          std::span<const std::uint64_t> row_mask, FaultSource& faults);

/// Same as above over all rows of the array.
FaultTrace row_parallel_execute(ArrayState& array, const GateOp& op, FaultSource& faults);

/// Executes ops cycle by cycle, enforcing that ops issued in the same cycle
/// occupy disjoint partitions.
class CycleExecutor {
 public:
  /// Disables every switch of `array`; cycles then open what they need.
  CycleExecutor(ArrayState& array, FaultSource& faults) : array_(array), faults_(faults) {
    array_.set_all_switches(false);
  }

  /// Starts a cycle. With `configure_switches`, enables exactly the
  /// boundaries interior to the spans of `ops` before they run.
  void begin_cycle(std::span<const GateOp> ops = {}, bool configure_switches = true);

  /// Incremental form: begin_cycle() with no ops disables the switches this
  /// executor enabled, then enable_span() opens the boundaries inside `op`.
  void enable_span(const GateOp& op);

  /// Broadcasts `op` to all rows.
  FaultTrace issue(const GateOp& op);
  /// Single-row issue (op.row).
  FaultTrace issue_in_row(const GateOp& op);

 private:
  void claim(const GateOp& op, std::size_t row_key);

  struct Claim {
    std::size_t row_key;
    std::size_t first;
    std::size_t last;
  };
  ArrayState& array_;
  FaultSource& faults_;
  std::vector<Claim> claims_;
  std::vector<std::uint64_t> all_rows_;
  std::vector<std::size_t> enabled_;
};

}  // namespace pimecc
