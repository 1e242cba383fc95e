#include "pimecc/cost.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pimecc/errors.hpp"
#include "pimecc/gates.hpp"

namespace pimecc {

double TechnologyParams::op_energy(const GateOp& op) const {
  const double e = (*this)[op.kind];
  return op.kind == GateKind::Reset ? e * static_cast<double>(op.outputs.size()) : e;
}

void TechnologyParams::validate() const {
  for (GateKind k : kAllGateKinds) {
    if (!((*this)[k] > 0.0)) {
      throw ConfigError("technology '" + name + "': energy for " + std::string(to_string(k)) +
                        " must be positive");
    }
  }
  if (!(write_energy > 0.0)) throw ConfigError("technology '" + name + "': write energy must be positive");
}

namespace {

TechnologyParams scaled(std::string name, double f) {
  TechnologyParams t;
  t.name = std::move(name);
  t[GateKind::Nor2_1] = 1.0 * f;
  t[GateKind::Nor2_2] = 1.8 * f;
  t[GateKind::Thr4_1] = 1.4 * f;
  t[GateKind::Copy] = 0.8 * f;
  t[GateKind::Reset] = 0.5 * f;
  t.write_energy = 1.0 * f;
  return t;
}

}  // namespace

std::vector<TechnologyParams> default_technologies() {
  return {scaled("ReRAM", 1.0), scaled("STT", 0.6), scaled("SOT_SHE", 0.25)};
}

TechnologyParams default_technology(std::string_view name) {
  for (auto& t : default_technologies()) {
    if (t.name == name) return t;
  }
  throw ConfigError("unknown technology '" + std::string(name) + "'");
}

std::vector<TechnologyParams> parse_technologies(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("technology file: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("technology file must be a JSON object");
  std::vector<TechnologyParams> out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    TechnologyParams t;
    try {
      t = default_technology(it.key());
    } catch (const ConfigError&) {
      t = default_technology("ReRAM");
      t.name = it.key();
    }
    if (!it.value().is_object()) throw ConfigError("technology '" + it.key() + "' must map kinds to energies");
    for (auto kv = it.value().begin(); kv != it.value().end(); ++kv) {
      if (!kv.value().is_number()) {
        throw ConfigError("technology '" + it.key() + "': energy for " + kv.key() + " must be a number");
      }
      const double v = kv.value().get<double>();
      if (kv.key() == "WRITE") {
        t.write_energy = v;
      } else if (auto k = parse_gate_kind(kv.key())) {
        t[*k] = v;
      } else {
        throw ConfigError("technology '" + it.key() + "': unknown gate kind '" + kv.key() + "'");
      }
    }
    t.validate();
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TechnologyParams> load_technologies(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open technology file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_technologies(ss.str());
}

std::size_t latency(const PipelineSchedule& schedule) {
  for (std::size_t c = schedule.cycles.size(); c-- > 0;) {
    if (!schedule.cycles[c].empty()) return c + 1;
  }
  return 0;
}

AreaReport area(std::size_t blocks_per_side, std::size_t block_width, std::size_t compute_columns) {
  if (compute_columns == 0) throw ConfigError("area needs a nonzero compute region");
  AreaReport a;
  a.parity_columns = 2 * blocks_per_side * block_width;
  a.compute_columns = compute_columns;
  a.overhead_pct = 100.0 * static_cast<double>(a.parity_columns) / static_cast<double>(compute_columns);
  return a;
}

AreaReport area(const DataLayout& layout) {
  return area(layout.blocks_per_side(), layout.block_width, layout.compute_columns());
}

EnergyBreakdown energy(std::span<const GateOp> ops, const TechnologyParams& tech, std::size_t rows) {
  EnergyBreakdown e;
  for (const GateOp& op : ops) {
    const double v = tech.op_energy(op) * static_cast<double>(rows);
    switch (op.role) {
      case OpRole::Compute: e.compute += v; break;
      case OpRole::Redundant: e.redundant += v; break;
      default: e.ecc += v; break;
    }
  }
  e.total = e.compute + e.ecc + e.redundant;
  return e;
}

EnergyBreakdown energy(const PipelineSchedule& schedule, const TechnologyParams& tech,
                       std::size_t rows) {
  return energy(schedule.ops, tech, rows);
}

Overheads overheads(const CostReport& p, const CostReport& b) {
  const std::size_t base_area = b.compute_area_columns + b.parity_area_columns;
  if (b.cycles == 0 || base_area == 0) throw ConfigError("baseline has zero latency or area");
  Overheads o;
  o.latency_pct = 100.0 * (static_cast<double>(p.cycles) - static_cast<double>(b.cycles)) /
                  static_cast<double>(b.cycles);
  const std::size_t prot_area = p.compute_area_columns + p.parity_area_columns;
  o.area_pct = 100.0 * (static_cast<double>(prot_area) - static_cast<double>(base_area)) /
               static_cast<double>(base_area);
  return o;
}

CostReport cost_report(const Plan& prot, const Plan& base,
                       const std::vector<TechnologyParams>& technologies) {
  CostReport b;
  b.cycles = latency(base.schedule);
  b.compute_area_columns = base.layout.compute_columns();
  CostReport r;
  r.cycles = latency(prot.schedule);
  r.baseline_cycles = b.cycles;
  r.compute_area_columns = prot.layout.compute_columns();
  r.parity_area_columns = prot.layout.parity_columns();
  for (const auto& t : technologies) {
    r.energy[t.name] = energy(prot.schedule, t, prot.layout.rows).total;
  }
  const Overheads o = overheads(r, b);
  r.latency_overhead_pct = o.latency_pct;
  r.area_overhead_pct = o.area_pct;
  return r;
}

std::size_t reallocations_needed(std::size_t implications, std::size_t fill_blocks) {
  if (implications == 0 || fill_blocks == 0) return 0;
  return (implications + fill_blocks - 1) / fill_blocks - 1;
}

AnalyticReport analytic_cost(const AnalyticParams& p) {
  if (p.gate_count == 0) throw ConfigError("analytic model needs at least one gate");
  if (p.mode == PipelineMode::Baseline) throw ConfigError("analytic model needs a protected mode");
  const std::size_t r = p.mode == PipelineMode::Detection ? 1 : p.parity_bits;
  if (r == 0) throw ConfigError("correction needs at least one parity bit");

  std::size_t left = 0;
  if (p.mode == PipelineMode::Detection) {
    left = (p.gate_count + 1) / 2;
  } else {
    const std::size_t full = p.gate_count / 4;
    left = 2 * full + std::min<std::size_t>(p.gate_count % 4, 2);
  }
  const std::size_t right = p.gate_count - left;
  const std::size_t busiest = std::max(left, right);

  AnalyticReport a;
  const std::size_t B = blocks_for_implications(busiest, p.R);
  a.blocks_per_side = B + 1;
  a.block_width = 3 + r;
  a.reallocations_per_side = std::max(reallocations_needed(left, B), reallocations_needed(right, B));
  const double per_event = p.realloc_cycles >= 0.0
                               ? p.realloc_cycles
                               : static_cast<double>(reclaim_cost(r, p.drain_cycles, p.reset_cycles)) - 1.0;
  a.baseline_cycles = p.gate_count;
  a.cycles = static_cast<double>(p.gate_count + p.drain_cycles + 2 * r) +
             static_cast<double>(a.reallocations_per_side) * per_event;
  a.compute_columns = p.gate_count + p.input_count;
  a.parity_columns = 2 * a.blocks_per_side * a.block_width;
  a.latency_overhead_pct = 100.0 * (a.cycles - static_cast<double>(a.baseline_cycles)) /
                           static_cast<double>(a.baseline_cycles);
  a.area_overhead_pct = 100.0 * static_cast<double>(a.parity_columns) / static_cast<double>(a.compute_columns);
  return a;
}

}  // namespace pimecc
