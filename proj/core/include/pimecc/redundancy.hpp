#pragma once

// DMR/TMR baselines and the hybrid space/time split used for iso-area
// comparisons.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pimecc/array.hpp"
#include "pimecc/hamming.hpp"
#include "pimecc/netlist.hpp"
#include "pimecc/pipeline.hpp"

namespace pimecc {

struct RedundancyPlan {
  unsigned copies = 3;          // N: 2 detects, 3 corrects by majority
  double space_fraction = 1.0;  // alpha: share of redundant ops replicated in space
  double vote_cycles = 0.0;     // read-out vote/compare cost, in cycles
  double vote_columns = 0.0;    // columns charged to voting (0: excluded)

  /// Throws ConfigError for N outside {2, 3} or alpha outside [0, 1].
  void validate() const;
};

struct RedundancyCost {
  std::size_t baseline_cycles = 0;
  std::size_t compute_columns = 0;
  double cycles = 0.0;
  double extra_columns = 0.0;
  double area_overhead_pct = 0.0;
  double latency_overhead_pct = 0.0;
};

/// Area overhead alpha*(N-1)*100% of the compute columns (plus vote
/// columns); latency overhead (1-alpha)*(N-1)*100% of the baseline cycles
/// plus the vote cost.
RedundancyCost redundancy_cost(const RedundancyPlan& plan, std::size_t baseline_cycles,
                               std::size_t compute_columns);

/// alpha = target / ((N-1)*100). Throws ConfigError when the target is
/// negative or above (N-1)*100.
double iso_area_alpha(double target_area_overhead_pct, unsigned copies);

/// Bitwise majority of three equal-length vectors.
Bits majority_vote(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                   std::span<const std::uint8_t> c);
/// Mismatch flags (XOR) of two equal-length vectors.
Bits dmr_compare(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);

struct RedundantOutcome {
  std::vector<std::vector<Bits>> copies;  // [copy][row] outputs
  std::vector<Bits> final_data;           // vote result (TMR) or copy 0 (DMR)
  std::vector<std::uint8_t> detected;     // DMR mismatch or any TMR disagreement
};

/// Executes N logical copies of the unprotected computation with
/// independent fault draws from `faults`, then votes (N=3) or compares
/// (N=2) at read-out. Copies run one after another on the same source so a
/// fixed seed fixes the result.
RedundantOutcome run_redundant(const NorNetlist& netlist, const RedundancyPlan& plan,
                               std::span<const Bits> inputs, FaultSource& faults);

/// Same with a prebuilt baseline plan (its row count must match inputs).
RedundantOutcome run_redundant(const NorNetlist& netlist, const Plan& baseline,
                               const RedundancyPlan& plan, std::span<const Bits> inputs,
                               FaultSource& faults);

}  // namespace pimecc
