#pragma once

// Truth functions of the stateful gates and XOR macro expansion.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "pimecc/array.hpp"

namespace pimecc {

struct GateKindInfo {
  std::string_view name;
  unsigned arity_in;
  unsigned arity_out;
  bool preset;  // value every output holds before conditional switching
};

const GateKindInfo& gate_info(GateKind kind);

constexpr bool nor2(bool a, bool b) { return !a && !b; }

/// Output 1 iff at least three of the four inputs are 0.
constexpr bool thr4(bool a, bool b, bool c, bool d) {
  return (!a + !b + !c + !d) >= 3;
}

constexpr bool copy(bool a) { return a; }

/// Evaluates `kind` on its inputs (RESET takes none and yields 0).
bool evaluate_gate(GateKind kind, std::span<const bool> inputs);

enum class XorVariant { TwoStep, ThreeStep };

struct XorCells {
  Column a = 0;
  Column b = 0;
  Column s1 = 0;
  Column s2 = 0;
  Column out = 0;
};

/// Expands out = a XOR b into gate ops. TwoStep is NOR2_2 -> (s1, s2) then
/// THR4_1(a, b, s1, s2); ThreeStep replaces the dual-output NOR by NOR2_1
/// followed by COPY. Throws std::invalid_argument if any two cells coincide.
std::vector<GateOp> xor_macro(const XorCells& cells, XorVariant variant,
                              OpRole role = OpRole::EccUpdate, std::size_t row = 0);

}  // namespace pimecc
