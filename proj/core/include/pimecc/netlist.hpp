#pragma once

// NOR-only netlists and the error-free reference evaluator.
//
// Text format, one statement per line:
//   INPUT <name>
//   NOR <out> <in1> <in2>
//   OUTPUT <name>
//   #@pos <gate> <index>     data-position annotation for correction mode
//   # anything else is a comment

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pimecc/hamming.hpp"

namespace pimecc {

using SignalId = std::uint32_t;

struct NorGate {
  SignalId in1 = 0;
  SignalId in2 = 0;
  friend bool operator==(const NorGate&, const NorGate&) = default;
};

/// Signals 0..inputs-1 are primary inputs; gate g drives signal inputs+g.
/// Gates are stored in topological order.
class NorNetlist {
 public:
  SignalId add_input(std::string name);
  SignalId add_gate(std::string name, SignalId in1, SignalId in2);
  void add_output(SignalId signal);

  std::size_t input_count() const noexcept { return input_count_; }
  std::size_t gate_count() const noexcept { return gates_.size(); }
  std::size_t signal_count() const noexcept { return input_count_ + gates_.size(); }

  const std::vector<NorGate>& gates() const noexcept { return gates_; }
  const std::vector<SignalId>& outputs() const noexcept { return outputs_; }

  bool is_input(SignalId s) const noexcept { return s < input_count_; }
  std::size_t gate_index(SignalId s) const { return s - input_count_; }
  SignalId gate_signal(std::size_t g) const { return static_cast<SignalId>(input_count_ + g); }

  const std::string& name(SignalId s) const { return names_.at(s); }
  std::optional<SignalId> find(std::string_view name) const;

  /// Optional data-position override per gate (correction mode).
  void set_position(std::size_t gate, std::size_t position);
  std::optional<std::size_t> position(std::size_t gate) const;
  bool has_positions() const noexcept { return !positions_.empty(); }

  /// For every signal, the gates that read it (ascending).
  std::vector<std::vector<std::size_t>> fanout() const;

  friend bool operator==(const NorNetlist&, const NorNetlist&) = default;

 private:
  std::size_t input_count_ = 0;
  std::vector<NorGate> gates_;
  std::vector<SignalId> outputs_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, SignalId> by_name_;
  std::vector<std::int64_t> positions_;  // -1 = unset; empty when none set
};

/// Parses the text format. Forward references are allowed; gates are
/// reordered topologically (stable). Throws NetlistError with the offending
/// line for undefined signals, redefinitions, arity errors and cycles.
NorNetlist parse_netlist(std::string_view text);
std::string print_netlist(const NorNetlist& netlist);

/// Values of every signal for one input assignment.
Bits evaluate_signals(const NorNetlist& netlist, std::span<const std::uint8_t> inputs);

/// Output bits for one input assignment. Throws NetlistError on a size
/// mismatch.
Bits evaluate(const NorNetlist& netlist, std::span<const std::uint8_t> inputs);

/// 64 assignments at once: inputs[i] holds input i for lanes 0..63.
std::vector<std::uint64_t> evaluate_words(const NorNetlist& netlist,
                                          std::span<const std::uint64_t> inputs);

}  // namespace pimecc
