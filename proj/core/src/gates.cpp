#include "pimecc/gates.hpp"

#include <algorithm>
#include <stdexcept>

namespace pimecc {

const GateKindInfo& gate_info(GateKind kind) {
  static const GateKindInfo kInfo[] = {
      {"NOR2_1", 2, 1, false},
      {"NOR2_2", 2, 2, false},
      {"THR4_1", 4, 1, false},
      {"COPY", 1, 1, false},
      {"RESET", 0, 0, false},
  };
  return kInfo[static_cast<std::size_t>(kind)];
}

bool evaluate_gate(GateKind kind, std::span<const bool> in) {
  const auto& info = gate_info(kind);
  if (in.size() != info.arity_in) throw std::invalid_argument("wrong number of gate inputs");
  switch (kind) {
    case GateKind::Nor2_1:
    case GateKind::Nor2_2: return nor2(in[0], in[1]);
    case GateKind::Thr4_1: return thr4(in[0], in[1], in[2], in[3]);
    case GateKind::Copy: return copy(in[0]);
    case GateKind::Reset: return false;
  }
  return false;
}

std::vector<GateOp> xor_macro(const XorCells& c, XorVariant variant, OpRole role,
                              std::size_t row) {
  std::array<Column, 5> cells{c.a, c.b, c.s1, c.s2, c.out};
  std::sort(cells.begin(), cells.end());
  if (std::adjacent_find(cells.begin(), cells.end()) != cells.end()) {
    throw std::invalid_argument("XOR macro cells overlap");
  }

  std::vector<GateOp> ops;
  if (variant == XorVariant::TwoStep) {
    ops.push_back(GateOp::make(GateKind::Nor2_2, {c.a, c.b}, {c.s1, c.s2}, role, row));
  } else {
    ops.push_back(GateOp::make(GateKind::Nor2_1, {c.a, c.b}, {c.s1}, role, row));
    ops.push_back(GateOp::make(GateKind::Copy, {c.s1}, {c.s2}, role, row));
  }
  ops.push_back(GateOp::make(GateKind::Thr4_1, {c.a, c.b, c.s1, c.s2}, {c.out}, role, row));
  return ops;
}

}  // namespace pimecc
