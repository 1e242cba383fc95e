#include "pimecc/scheduler.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <unordered_map>

namespace pimecc {

std::size_t PartitionMap::partition_of(Column c) const {
  return static_cast<std::size_t>(
      std::upper_bound(boundaries_.begin(), boundaries_.end(), c) - boundaries_.begin());
}

DependencyGraph build_dependencies(std::span<const GateOp> ops, bool chain_compute) {
  struct Access {
    std::size_t writer = SIZE_MAX;
    std::vector<std::size_t> readers;  // since the last write
  };
  std::unordered_map<Column, Access> cells;
  DependencyGraph g;
  g.preds.resize(ops.size());
  std::size_t last_compute = SIZE_MAX;

  for (std::size_t j = 0; j < ops.size(); ++j) {
    auto& preds = g.preds[j];
    const GateOp& op = ops[j];
    for (Column c : op.inputs) {
      auto& a = cells[c];
      if (a.writer != SIZE_MAX) preds.push_back(a.writer);
    }
    for (Column c : op.outputs) {
      auto& a = cells[c];
      if (a.writer != SIZE_MAX) preds.push_back(a.writer);
      for (std::size_t r : a.readers) {
        if (r != j) preds.push_back(r);
      }
    }
    if (chain_compute && op.role == OpRole::Compute) {
      if (last_compute != SIZE_MAX) preds.push_back(last_compute);
      last_compute = j;
    }
    // Reads are recorded before writes so an op never depends on itself.
    for (Column c : op.inputs) {
      auto& r = cells[c].readers;
      if (r.empty() || r.back() != j) r.push_back(j);
    }
    for (Column c : op.outputs) {
      auto& a = cells[c];
      a.writer = j;
      a.readers.clear();
    }
    std::sort(preds.begin(), preds.end());
    preds.erase(std::unique(preds.begin(), preds.end()), preds.end());
  }
  return g;
}

std::vector<std::vector<std::size_t>> list_schedule(std::vector<GateOp>& ops,
                                                    const PartitionMap& partitions,
                                                    bool chain_compute) {
  const DependencyGraph deps = build_dependencies(ops, chain_compute);
  const std::size_t n = ops.size();
  std::vector<std::vector<std::size_t>> succs(n);
  std::vector<std::size_t> pending(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    pending[j] = deps.preds[j].size();
    for (std::size_t p : deps.preds[j]) succs[p].push_back(j);
  }
  std::vector<std::size_t> first(n), last(n);
  for (std::size_t j = 0; j < n; ++j) {
    first[j] = partitions.first(ops[j]);
    last[j] = partitions.last(ops[j]);
  }

  using MinHeap = std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>>;
  MinHeap ready;
  for (std::size_t j = 0; j < n; ++j) {
    if (pending[j] == 0) ready.push(j);
  }

  std::vector<std::vector<std::size_t>> cycles;
  std::vector<std::size_t> deferred;
  std::vector<std::size_t> enabled;
  std::size_t done = 0;
  while (done < n) {
    std::vector<std::size_t> placed;
    deferred.clear();
    enabled.clear();
    while (!ready.empty()) {
      const std::size_t j = ready.top();
      ready.pop();
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](std::size_t q) {
        return first[j] <= last[q] && first[q] <= last[j];
      });
      if (clash) {
        deferred.push_back(j);
        continue;
      }
      placed.push_back(j);
      ops[j].cycle = cycles.size();
      for (std::size_t s : succs[j]) {
        if (--pending[s] == 0) enabled.push_back(s);
      }
    }
    for (std::size_t j : deferred) ready.push(j);
    for (std::size_t j : enabled) ready.push(j);
    done += placed.size();
    std::sort(placed.begin(), placed.end());
    cycles.push_back(std::move(placed));
  }
  return cycles;
}

std::vector<std::string> validate_cycles(std::span<const GateOp> ops,
                                         const PartitionMap& partitions, bool chain_compute) {
  std::vector<std::string> problems;
  const DependencyGraph deps = build_dependencies(ops, chain_compute);
  for (std::size_t j = 0; j < ops.size(); ++j) {
    for (std::size_t p : deps.preds[j]) {
      if (ops[p].cycle >= ops[j].cycle) {
        problems.push_back("op " + std::to_string(j) + " at cycle " + std::to_string(ops[j].cycle) +
                           " depends on op " + std::to_string(p) + " at cycle " +
                           std::to_string(ops[p].cycle));
      }
    }
  }
  std::vector<std::size_t> order(ops.size());
  for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return ops[a].cycle < ops[b].cycle; });
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s;
    while (e < order.size() && ops[order[e]].cycle == ops[order[s]].cycle) ++e;
    for (std::size_t a = s; a < e; ++a) {
      for (std::size_t b = a + 1; b < e; ++b) {
        const GateOp& x = ops[order[a]];
        const GateOp& y = ops[order[b]];
        if (x.row != y.row) continue;
        if (partitions.first(x) <= partitions.last(y) && partitions.first(y) <= partitions.last(x)) {
          problems.push_back("ops " + std::to_string(order[a]) + " and " + std::to_string(order[b]) +
                             " share a partition in cycle " + std::to_string(x.cycle));
        }
      }
    }
    s = e;
  }
  return problems;
}

}  // namespace pimecc
