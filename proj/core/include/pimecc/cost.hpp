#pragma once

// Latency, area and energy accounting, simulated and closed-form.

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pimecc/array.hpp"
#include "pimecc/pipeline.hpp"

namespace pimecc {

/// Energy in abstract units. RESET is charged per cleared cell, every other
/// kind per op and row.
struct TechnologyParams {
  std::string name;
  std::array<double, 5> energy_per_op{};  // indexed by GateKind
  double write_energy = 0.0;              // per input cell loaded

  double op_energy(const GateOp& op) const;
  double& operator[](GateKind k) { return energy_per_op[static_cast<std::size_t>(k)]; }
  double operator[](GateKind k) const { return energy_per_op[static_cast<std::size_t>(k)]; }
  /// Throws ConfigError unless every energy is positive.
  void validate() const;
};

/// Built-in tables for "ReRAM", "STT" and "SOT_SHE" (in that order).
std::vector<TechnologyParams> default_technologies();
/// Looks up a built-in table by name; throws ConfigError if unknown.
TechnologyParams default_technology(std::string_view name);

/// JSON object: technology name -> { gate kind name -> energy }. Kinds are
/// NOR2_1, NOR2_2, THR4_1, COPY, RESET and WRITE. Missing kinds fall back to
/// the built-in table of the same name (or ReRAM for new names).
std::vector<TechnologyParams> parse_technologies(std::string_view json_text);
std::vector<TechnologyParams> load_technologies(const std::string& path);

/// Index of the last non-empty cycle plus one.
std::size_t latency(const PipelineSchedule& schedule);

struct AreaReport {
  std::size_t parity_columns = 0;
  std::size_t compute_columns = 0;
  double overhead_pct = 0.0;
};

AreaReport area(const DataLayout& layout);
/// 2 * blocks_per_side * block_width against `compute_columns`.
AreaReport area(std::size_t blocks_per_side, std::size_t block_width, std::size_t compute_columns);

struct EnergyBreakdown {
  double compute = 0.0;  // Compute-role ops
  double ecc = 0.0;      // updates, reclamation and finalize
  double redundant = 0.0;
  double total = 0.0;
};

/// Sum of op energies over the schedule, times `rows`.
EnergyBreakdown energy(const PipelineSchedule& schedule, const TechnologyParams& tech,
                       std::size_t rows = 1);
EnergyBreakdown energy(std::span<const GateOp> ops, const TechnologyParams& tech,
                       std::size_t rows = 1);

struct Overheads {
  double latency_pct = 0.0;
  double area_pct = 0.0;
};

struct CostReport {
  std::size_t cycles = 0;
  std::size_t baseline_cycles = 0;
  std::size_t parity_area_columns = 0;
  std::size_t compute_area_columns = 0;
  std::map<std::string, double> energy;  // technology -> total
  double latency_overhead_pct = 0.0;
  double area_overhead_pct = 0.0;
};

/// (protected - baseline) / baseline, in percent, for cycles and columns
/// (a baseline's area is its compute columns; a protected report adds its
/// parity columns). Throws ConfigError on a zero baseline.
Overheads overheads(const CostReport& protected_run, const CostReport& baseline);

/// Simulated-mode report for a plan against its unprotected baseline.
CostReport cost_report(const Plan& protected_plan, const Plan& baseline_plan,
                       const std::vector<TechnologyParams>& technologies);

/// Closed-form model with full overlap of ECC updates and computation.
struct AnalyticParams {
  std::size_t gate_count = 0;
  std::size_t input_count = 0;
  std::size_t R = 0;
  PipelineMode mode = PipelineMode::Detection;
  std::size_t parity_bits = 1;  // n - k in correction mode
  std::size_t drain_cycles = 2;
  std::size_t reset_cycles = 1;
  /// Exposed cycles per reclamation; negative selects the default,
  /// reclaim_cost - 1 (the first drain cycle overlaps the side alternation).
  double realloc_cycles = -1.0;
};

struct AnalyticReport {
  std::size_t blocks_per_side = 0;  // fill blocks plus the anchor
  std::size_t block_width = 0;
  std::size_t reallocations_per_side = 0;
  double cycles = 0.0;
  std::size_t baseline_cycles = 0;
  std::size_t parity_columns = 0;
  std::size_t compute_columns = 0;
  double latency_overhead_pct = 0.0;
  double area_overhead_pct = 0.0;
};

/// cycles = G + drain + 2 * parity_bits (final XOR per parity bit)
///        + reallocations_per_side * realloc_cycles.
AnalyticReport analytic_cost(const AnalyticParams& params);

/// Reclamations a side performs: ceil(implications / B) - 1.
std::size_t reallocations_needed(std::size_t implications, std::size_t fill_blocks);

}  // namespace pimecc
