#include "pimecc/netlist.hpp"

#include <algorithm>
#include <charconv>
#include <queue>
#include <sstream>

#include "pimecc/errors.hpp"

namespace pimecc {

SignalId NorNetlist::add_input(std::string name) {
  if (!gates_.empty()) throw NetlistError(0, "inputs must be declared before gates");
  if (by_name_.count(name)) throw NetlistError(0, "signal '" + name + "' redefined");
  const auto id = static_cast<SignalId>(input_count_++);
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  return id;
}

SignalId NorNetlist::add_gate(std::string name, SignalId in1, SignalId in2) {
  const SignalId id = gate_signal(gates_.size());
  if (in1 >= id || in2 >= id) throw NetlistError(0, "gate '" + name + "' reads a later signal");
  if (by_name_.count(name)) throw NetlistError(0, "signal '" + name + "' redefined");
  gates_.push_back({in1, in2});
  by_name_.emplace(name, id);
  names_.push_back(std::move(name));
  if (!positions_.empty()) positions_.push_back(-1);
  return id;
}

void NorNetlist::add_output(SignalId signal) {
  if (signal >= signal_count()) throw NetlistError(0, "output refers to an unknown signal");
  outputs_.push_back(signal);
}

std::optional<SignalId> NorNetlist::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

void NorNetlist::set_position(std::size_t gate, std::size_t position) {
  if (gate >= gates_.size()) throw NetlistError(0, "position annotation on unknown gate");
  if (positions_.empty()) positions_.assign(gates_.size(), -1);
  positions_[gate] = static_cast<std::int64_t>(position);
}

std::optional<std::size_t> NorNetlist::position(std::size_t gate) const {
  if (positions_.empty() || positions_.at(gate) < 0) return std::nullopt;
  return static_cast<std::size_t>(positions_[gate]);
}

std::vector<std::vector<std::size_t>> NorNetlist::fanout() const {
  std::vector<std::vector<std::size_t>> out(signal_count());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    out[gates_[g].in1].push_back(g);
    if (gates_[g].in2 != gates_[g].in1) out[gates_[g].in2].push_back(g);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> tok;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) tok.push_back(line.substr(i, j - i));
    i = j;
  }
  return tok;
}

struct RawGate {
  std::string out;
  std::string in1;
  std::string in2;
  std::size_t line;
};

}  // namespace

NorNetlist parse_netlist(std::string_view text) {
  std::vector<std::pair<std::string, std::size_t>> inputs;
  std::vector<RawGate> raw;
  std::vector<std::pair<std::string, std::size_t>> outputs;
  std::vector<std::tuple<std::string, std::size_t, std::size_t>> annotations;
  std::unordered_map<std::string, std::size_t> defined;  // name -> line

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;

    if (line.rfind("#@pos", 0) == 0) {
      const auto tok = split(line);
      std::size_t idx = 0;
      if (tok.size() != 3 ||
          std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), idx).ec != std::errc{}) {
        throw NetlistError(line_no, "expected '#@pos <gate> <index>'");
      }
      annotations.emplace_back(std::string(tok[1]), idx, line_no);
      continue;
    }
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split(line);
    if (tok.empty()) continue;

    auto define = [&](std::string_view name) {
      auto [it, fresh] = defined.emplace(std::string(name), line_no);
      if (!fresh) {
        throw NetlistError(line_no, "signal '" + std::string(name) + "' redefined (first defined on line " +
                                        std::to_string(it->second) + ")");
      }
    };

    if (tok[0] == "INPUT") {
      if (tok.size() != 2) throw NetlistError(line_no, "INPUT takes exactly one name");
      define(tok[1]);
      inputs.emplace_back(std::string(tok[1]), line_no);
    } else if (tok[0] == "NOR") {
      if (tok.size() != 4) throw NetlistError(line_no, "NOR takes an output and exactly two inputs");
      define(tok[1]);
      raw.push_back({std::string(tok[1]), std::string(tok[2]), std::string(tok[3]), line_no});
    } else if (tok[0] == "OUTPUT") {
      if (tok.size() != 2) throw NetlistError(line_no, "OUTPUT takes exactly one name");
      outputs.emplace_back(std::string(tok[1]), line_no);
    } else {
      throw NetlistError(line_no, "unknown statement '" + std::string(tok[0]) + "'");
    }
  }

  // Resolve references and sort gates topologically, keeping source order
  // among independent gates.
  std::unordered_map<std::string, std::size_t> gate_by_name;
  for (std::size_t g = 0; g < raw.size(); ++g) gate_by_name.emplace(raw[g].out, g);
  std::unordered_map<std::string, std::size_t> input_by_name;
  for (std::size_t i = 0; i < inputs.size(); ++i) input_by_name.emplace(inputs[i].first, i);

  std::vector<std::vector<std::size_t>> users(raw.size());
  std::vector<std::size_t> pending(raw.size(), 0);
  for (std::size_t g = 0; g < raw.size(); ++g) {
    for (const std::string* in : {&raw[g].in1, &raw[g].in2}) {
      if (input_by_name.count(*in)) continue;
      auto it = gate_by_name.find(*in);
      if (it == gate_by_name.end()) {
        throw NetlistError(raw[g].line, "undefined signal '" + *in + "'");
      }
      if (in == &raw[g].in2 && raw[g].in2 == raw[g].in1) continue;
      users[it->second].push_back(g);
      ++pending[g];
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t g = 0; g < raw.size(); ++g) {
    if (pending[g] == 0) ready.push(g);
  }
  std::vector<std::size_t> order;
  order.reserve(raw.size());
  while (!ready.empty()) {
    const std::size_t g = ready.top();
    ready.pop();
    order.push_back(g);
    for (std::size_t u : users[g]) {
      if (--pending[u] == 0) ready.push(u);
    }
  }
  if (order.size() != raw.size()) {
    for (std::size_t g = 0; g < raw.size(); ++g) {
      if (pending[g] != 0) {
        throw NetlistError(raw[g].line, "combinational cycle through '" + raw[g].out + "'");
      }
    }
  }

  NorNetlist net;
  for (const auto& [name, line] : inputs) net.add_input(name);
  for (std::size_t g : order) {
    const auto a = *net.find(raw[g].in1);
    const auto b = *net.find(raw[g].in2);
    net.add_gate(raw[g].out, a, b);
  }
  for (const auto& [name, line] : outputs) {
    auto id = net.find(name);
    if (!id) throw NetlistError(line, "undefined signal '" + name + "'");
    net.add_output(*id);
  }
  for (const auto& [name, idx, line] : annotations) {
    auto id = net.find(name);
    if (!id || net.is_input(*id)) throw NetlistError(line, "position annotation on unknown gate '" + name + "'");
    net.set_position(net.gate_index(*id), idx);
  }
  if (net.gate_count() == 0) throw NetlistError(0, "netlist has no gates");
  return net;
}

std::string print_netlist(const NorNetlist& net) {
  std::ostringstream os;
  for (std::size_t i = 0; i < net.input_count(); ++i) {
    os << "INPUT " << net.name(static_cast<SignalId>(i)) << '\n';
  }
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    const auto& gate = net.gates()[g];
    os << "NOR " << net.name(net.gate_signal(g)) << ' ' << net.name(gate.in1) << ' '
       << net.name(gate.in2) << '\n';
  }
  for (SignalId s : net.outputs()) os << "OUTPUT " << net.name(s) << '\n';
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    if (auto p = net.position(g)) os << "#@pos " << net.name(net.gate_signal(g)) << ' ' << *p << '\n';
  }
  return os.str();
}

Bits evaluate_signals(const NorNetlist& net, std::span<const std::uint8_t> inputs) {
  if (inputs.size() != net.input_count()) {
    throw NetlistError(0, "expected " + std::to_string(net.input_count()) + " input values, got " +
                              std::to_string(inputs.size()));
  }
  Bits v(net.signal_count());
  for (std::size_t i = 0; i < inputs.size(); ++i) v[i] = inputs[i] & 1u;
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    const auto& gate = net.gates()[g];
    v[net.input_count() + g] = (v[gate.in1] | v[gate.in2]) ? 0 : 1;
  }
  return v;
}

Bits evaluate(const NorNetlist& net, std::span<const std::uint8_t> inputs) {
  const Bits v = evaluate_signals(net, inputs);
  Bits out;
  out.reserve(net.outputs().size());
  for (SignalId s : net.outputs()) out.push_back(v[s]);
  return out;
}

std::vector<std::uint64_t> evaluate_words(const NorNetlist& net,
                                          std::span<const std::uint64_t> inputs) {
  if (inputs.size() != net.input_count()) throw NetlistError(0, "input word count mismatch");
  std::vector<std::uint64_t> v(net.signal_count());
  std::copy(inputs.begin(), inputs.end(), v.begin());
  for (std::size_t g = 0; g < net.gate_count(); ++g) {
    const auto& gate = net.gates()[g];
    v[net.input_count() + g] = ~(v[gate.in1] | v[gate.in2]);
  }
  std::vector<std::uint64_t> out;
  out.reserve(net.outputs().size());
  for (SignalId s : net.outputs()) out.push_back(v[s]);
  return out;
}

}  // namespace pimecc
