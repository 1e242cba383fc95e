#pragma once

// Greedy list scheduling of gate-op programs under the one-op-per-partition
// rule. Dependencies come from cell accesses in program order: read after
// write, write after read and write after write, each needing one cycle.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pimecc/array.hpp"

namespace pimecc {

/// Maps columns to partitions for a fixed set of boundaries.
class PartitionMap {
 public:
  PartitionMap() = default;
  explicit PartitionMap(std::vector<Column> boundaries) : boundaries_(std::move(boundaries)) {}

  std::size_t partition_of(Column c) const;
  std::size_t first(const GateOp& op) const { return partition_of(op.span.lo); }
  std::size_t last(const GateOp& op) const { return partition_of(op.span.hi); }
  const std::vector<Column>& boundaries() const noexcept { return boundaries_; }

 private:
  std::vector<Column> boundaries_;
};

/// preds[j] lists the ops that must finish before op j issues.
struct DependencyGraph {
  std::vector<std::vector<std::size_t>> preds;
};

/// With `chain_compute`, consecutive Compute-role ops are also ordered so the
/// computation proceeds in program order.
DependencyGraph build_dependencies(std::span<const GateOp> ops, bool chain_compute = true);

/// Assigns ops[j].cycle for every op and returns op indices per cycle. Among
/// ready ops, lower program index wins; an op that cannot be placed does not
/// block later ones.
std::vector<std::vector<std::size_t>> list_schedule(std::vector<GateOp>& ops,
                                                    const PartitionMap& partitions,
                                                    bool chain_compute = true);

/// Replays cycle assignments and reports every partition overlap and every
/// dependency issued too early. Empty means legal.
std::vector<std::string> validate_cycles(std::span<const GateOp> ops,
                                         const PartitionMap& partitions,
                                         bool chain_compute = true);

}  // namespace pimecc
