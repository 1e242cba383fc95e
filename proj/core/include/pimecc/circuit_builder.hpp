#pragma once

// Incremental NOR-netlist construction with constant folding and structural
// hashing. Word-level helpers use little-endian bit vectors (bit 0 first).

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pimecc/netlist.hpp"

namespace pimecc {

class CircuitBuilder {
 public:
  /// A signal or one of the two constants.
  struct Wire {
    std::int64_t id = -1;  // >= 0: signal; -1: constant 0; -2: constant 1
    bool is_const() const { return id < 0; }
    bool const_value() const { return id == -2; }
    friend bool operator==(Wire, Wire) = default;
  };
  using Word = std::vector<Wire>;

  static Wire zero() { return {-1}; }
  static Wire one() { return {-2}; }
  static Wire constant(bool v) { return v ? one() : zero(); }

  Wire input(const std::string& name);
  Word input_word(const std::string& prefix, unsigned bits);

  Wire nor(Wire a, Wire b);
  Wire not_(Wire a) { return nor(a, a); }
  Wire or_(Wire a, Wire b) { return not_(nor(a, b)); }
  Wire and_(Wire a, Wire b) { return nor(not_(a), not_(b)); }
  Wire xnor(Wire a, Wire b);
  Wire xor_(Wire a, Wire b) { return not_(xnor(a, b)); }
  Wire mux(Wire sel, Wire if0, Wire if1);

  struct SumCarry {
    Wire sum;
    Wire carry;
  };
  SumCarry full_add(Wire a, Wire b, Wire cin);

  /// Ripple-carry a + b + cin over max(|a|,|b|) bits (shorter operand is
  /// zero-extended); the carry-out is appended as the top bit.
  Word add(const Word& a, const Word& b, Wire cin);

  /// Two's-complement helpers at fixed width (results wrap).
  Word add_signed(const Word& a, const Word& b, unsigned width);
  Word sub_signed(const Word& a, const Word& b, unsigned width);
  static Word sign_extend(const Word& a, unsigned width);
  static Word shift_left(const Word& a, unsigned k);
  /// Arithmetic shift right (floor), keeping the width.
  static Word shift_right_arith(const Word& a, unsigned k);
  static Word constant_word(std::int64_t value, unsigned width);

  /// Signed x * c for a compile-time constant, exact at `width` bits.
  Word mul_const(const Word& x, std::int64_t c, unsigned width);

  void output(Wire w, const std::string& name);
  void output_word(const Word& w, const std::string& prefix);

  std::size_t gate_count() const { return gates_.size(); }

  /// Materializes the netlist, dropping gates no output depends on. Constant
  /// outputs are built from the first input as NOR(x, NOR(x, x)).
  NorNetlist build() const;

 private:
  struct Gate {
    std::int64_t a;
    std::int64_t b;
  };
  std::vector<std::string> input_names_;
  std::vector<Gate> gates_;  // signal id = inputs + index at build time
  struct PairHash {
    std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
      return std::hash<std::int64_t>{}(k.first * 1000003 ^ k.second);
    }
  };
  std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::int64_t, PairHash> hash_;
  std::vector<std::pair<Wire, std::string>> outputs_;
  std::unordered_map<std::int64_t, std::string> preferred_names_;

  // Inputs use ids 0..I-1 and gates kGateBase + index, so inputs may be
  // declared at any time.
  static constexpr std::int64_t kGateBase = std::int64_t{1} << 40;
};

}  // namespace pimecc
