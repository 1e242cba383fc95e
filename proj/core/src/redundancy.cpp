#include "pimecc/redundancy.hpp"

#include <stdexcept>
#include <string>

#include "pimecc/errors.hpp"
#include "pimecc/pipeline.hpp"

namespace pimecc {

void RedundancyPlan::validate() const {
  if (copies != 2 && copies != 3) throw ConfigError("redundancy supports 2 or 3 copies");
  if (!(space_fraction >= 0.0 && space_fraction <= 1.0)) {
    throw ConfigError("space fraction must be in [0, 1]");
  }
  if (vote_cycles < 0.0 || vote_columns < 0.0) throw ConfigError("vote costs must be non-negative");
}

RedundancyCost redundancy_cost(const RedundancyPlan& plan, std::size_t baseline_cycles,
                               std::size_t compute_columns) {
  plan.validate();
  if (baseline_cycles == 0 || compute_columns == 0) throw ConfigError("empty baseline");
  const double extra = static_cast<double>(plan.copies - 1);
  RedundancyCost c;
  c.baseline_cycles = baseline_cycles;
  c.compute_columns = compute_columns;
  c.extra_columns = plan.space_fraction * extra * static_cast<double>(compute_columns) + plan.vote_columns;
  c.cycles = static_cast<double>(baseline_cycles) * (1.0 + (1.0 - plan.space_fraction) * extra) +
             plan.vote_cycles;
  c.area_overhead_pct = 100.0 * c.extra_columns / static_cast<double>(compute_columns);
  c.latency_overhead_pct =
      100.0 * (c.cycles - static_cast<double>(baseline_cycles)) / static_cast<double>(baseline_cycles);
  return c;
}

double iso_area_alpha(double target, unsigned copies) {
  if (copies != 2 && copies != 3) throw ConfigError("redundancy supports 2 or 3 copies");
  const double full = 100.0 * (copies - 1);
  if (!(target >= 0.0 && target <= full)) {
    throw ConfigError("area target " + std::to_string(target) + "% is not reachable with " +
                      std::to_string(copies) + " copies");
  }
  return target / full;
}

Bits majority_vote(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                   std::span<const std::uint8_t> c) {
  if (a.size() != b.size() || a.size() != c.size()) {
    throw std::invalid_argument("vote operands differ in length");
  }
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(((a[i] & b[i]) | (a[i] & c[i]) | (b[i] & c[i])) & 1u);
  }
  return out;
}

Bits dmr_compare(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  if (a.size() != b.size()) throw std::invalid_argument("compare operands differ in length");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = (a[i] ^ b[i]) & 1u;
  return out;
}

RedundantOutcome run_redundant(const NorNetlist& netlist, const RedundancyPlan& plan,
                               std::span<const Bits> inputs, FaultSource& faults) {
  const Plan base = pimecc::plan(netlist, PipelineMode::Baseline, std::nullopt, {inputs.size(), 0});
  return run_redundant(netlist, base, plan, inputs, faults);
}

RedundantOutcome run_redundant(const NorNetlist& netlist, const Plan& base,
                               const RedundancyPlan& plan, std::span<const Bits> inputs,
                               FaultSource& faults) {
  plan.validate();
  if (base.schedule.mode != PipelineMode::Baseline) throw ConfigError("redundancy needs a baseline plan");
  RedundantOutcome out;
  RunOptions opt;
  opt.faults = &faults;
  for (unsigned k = 0; k < plan.copies; ++k) {
    out.copies.push_back(run(base.schedule, base.layout, netlist, inputs, opt).final_data);
  }
  const std::size_t rows = inputs.size();
  out.final_data.resize(rows);
  out.detected.assign(rows, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const Bits& a = out.copies[0][r];
    const Bits& b = out.copies[1][r];
    if (plan.copies == 3) {
      const Bits& c = out.copies[2][r];
      out.final_data[r] = majority_vote(a, b, c);
      out.detected[r] = (a != b || a != c) ? 1 : 0;
    } else {
      out.final_data[r] = a;
      out.detected[r] = a != b ? 1 : 0;
    }
  }
  return out;
}

}  // namespace pimecc
