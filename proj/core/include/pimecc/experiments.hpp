#pragma once

// Experiment configuration and runners: coverage sweeps, R sweeps, FFT
// accuracy and energy breakdowns, each producing a fixed-column CSV table
// and a JSON summary.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimecc/array.hpp"
#include "pimecc/cost.hpp"
#include "pimecc/netlist.hpp"
#include "pimecc/pipeline.hpp"
#include "pimecc/redundancy.hpp"
#include "pimecc/workloads.hpp"

namespace pimecc {

enum class ExperimentKind { Coverage, RSweep, FftAccuracy, Energy };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view name);

enum class SchemeKind { None, Detection, Hamming, Dmr, Tmr, Hybrid };

struct SchemeSpec {
  SchemeKind kind = SchemeKind::None;
  double alpha = 0.7;  // hybrid only

  /// "none", "detection", "hamming", "dmr", "tmr", "hybrid" or "hybrid(0.7)".
  static SchemeSpec parse(std::string_view text, double default_alpha = 0.7);
  std::string label() const;
};

struct NetlistSpec {
  std::string generator = "random";  // random | adder | multiplier | fft | file | synthetic
  std::size_t gates = 64;            // random, synthetic
  std::size_t inputs = 8;            // random, synthetic
  unsigned bits = 8;                 // adder, multiplier
  unsigned points = 16;              // fft
  FixedPointFormat format{8, 7};     // fft
  std::string path;                  // file
  std::uint64_t seed = 1;            // random
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Coverage;
  NetlistSpec netlist;
  std::vector<std::string> schemes;
  double alpha = 0.7;
  std::size_t R = 16;
  std::vector<std::size_t> r_values;
  std::size_t code_k = 4;
  std::vector<double> p_grid;
  std::size_t trials = 1000;
  std::size_t rows = 32;
  std::uint64_t seed = 1;
  std::vector<std::string> technologies;
  std::string technology_file;
  bool simulate = true;  // rsweep: add simulated rows next to analytic ones
  unsigned threads = 0;  // 0: hardware concurrency
  std::string out = "pimecc_out";

  /// Desk-scale preset for an experiment kind.
  static ExperimentConfig defaults(ExperimentKind kind);
  /// Throws ConfigError on any invalid field.
  void validate() const;
};

/// Parses a JSON config; absent fields keep the preset of its "experiment".
/// Unknown keys are rejected.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON (sorted keys). Output path and thread count are excluded
/// when `for_hash` is set, since they do not affect results.
std::string config_to_json(const ExperimentConfig& config, bool for_hash = false);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Deterministic seed stream: splitmix64 over (base, a, b, c).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};
/// 95% Wilson score interval for k successes out of n.
Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.96);

NorNetlist build_netlist(const NetlistSpec& s);

/// Runs one protection scheme on a fixed netlist and row count.
class SchemeExecutor {
 public:
  SchemeExecutor(const NorNetlist& netlist, SchemeSpec scheme, std::size_t rows,
                 std::size_t R, std::size_t code_k);

  struct Result {
    std::vector<Bits> data;            // outputs per row after resolution
    std::vector<std::uint8_t> flagged; // detection / mismatch / nonzero syndrome
  };
  Result execute(std::span<const Bits> inputs, FaultSource& faults) const;

  const SchemeSpec& scheme() const noexcept { return scheme_; }
  std::size_t rows() const noexcept { return rows_; }
  /// Plan of the pipeline schemes, or the baseline for redundancy schemes.
  const Plan& plan() const noexcept { return plan_; }

 private:
  const NorNetlist& netlist_;
  SchemeSpec scheme_;
  std::size_t rows_;
  Plan plan_;
};

/// Exact error-rate bounds for a tiny netlist on one row, averaged over all
/// input assignments (at most 2^12): every pattern of up to `max_faults`
/// flips among the cells the scheme writes, correction replays included, is
/// enumerated with its exact probability. `high` adds the probability mass
/// left unenumerated.
Interval exact_error_rate(const NorNetlist& netlist, SchemeSpec scheme, double p,
                          std::size_t max_faults, std::size_t R = 0, std::size_t code_k = 4);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string summary_json;  // summary object, config echo included

  std::string to_csv() const;
};

Table run_coverage_sweep(const ExperimentConfig& config);
Table run_r_sweep(const ExperimentConfig& config);
Table run_fft_accuracy(const ExperimentConfig& config);
Table run_energy_breakdown(const ExperimentConfig& config);
Table run_experiment(const ExperimentConfig& config);

/// Writes <prefix>.csv and <prefix>.json, each through a temporary file and
/// a rename so readers never observe partial output.
void write_outputs(const Table& table, const std::string& prefix);
void write_file_atomic(const std::string& path, std::string_view contents);

/// Shortest round-trip decimal text of a double; integral values print as
/// plain integers, non-finite ones as "inf", "-inf" or "nan".
std::string format_double(double v);

}  // namespace pimecc
