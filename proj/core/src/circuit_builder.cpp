#include "pimecc/circuit_builder.hpp"

#include <algorithm>
#include <unordered_set>

#include "pimecc/errors.hpp"

namespace pimecc {

using Wire = CircuitBuilder::Wire;
using Word = CircuitBuilder::Word;

Wire CircuitBuilder::input(const std::string& name) {
  input_names_.push_back(name);
  return {static_cast<std::int64_t>(input_names_.size() - 1)};
}

Word CircuitBuilder::input_word(const std::string& prefix, unsigned bits) {
  Word w;
  for (unsigned i = 0; i < bits; ++i) w.push_back(input(prefix + std::to_string(i)));
  return w;
}

Wire CircuitBuilder::nor(Wire a, Wire b) {
  if (a.is_const() && b.is_const()) return constant(!a.const_value() && !b.const_value());
  if ((a.is_const() && a.const_value()) || (b.is_const() && b.const_value())) return zero();
  if (a.is_const()) a = b;  // NOR(0, x) = NOT x
  if (b.is_const()) b = a;
  if (a.id > b.id) std::swap(a, b);

  // NOT(NOT y) = y
  if (a == b && a.id >= kGateBase) {
    const Gate& g = gates_[static_cast<std::size_t>(a.id - kGateBase)];
    if (g.a == g.b) return {g.a};
  }
  auto key = std::make_pair(a.id, b.id);
  if (auto it = hash_.find(key); it != hash_.end()) return {it->second};
  const std::int64_t id = kGateBase + static_cast<std::int64_t>(gates_.size());
  gates_.push_back({a.id, b.id});
  hash_.emplace(key, id);
  return {id};
}

Wire CircuitBuilder::xnor(Wire a, Wire b) {
  const Wire n1 = nor(a, b);
  return nor(nor(a, n1), nor(b, n1));
}

Wire CircuitBuilder::mux(Wire sel, Wire if0, Wire if1) {
  const Wire x = nor(sel, not_(if0));        // !sel & if0
  const Wire y = nor(not_(sel), not_(if1));  // sel & if1
  return or_(x, y);
}

CircuitBuilder::SumCarry CircuitBuilder::full_add(Wire a, Wire b, Wire cin) {
  if (cin.is_const() && !cin.const_value()) {
    // half adder: sum = a ^ b, carry = !(a | b) nor (a ^ b) = a & b
    const Wire n1 = nor(a, b);
    const Wire sum = not_(nor(nor(a, n1), nor(b, n1)));
    return {sum, nor(n1, sum)};
  }
  const Wire n1 = nor(a, b);
  const Wire t = nor(nor(a, n1), nor(b, n1));  // XNOR(a, b)
  const Wire m1 = nor(t, cin);
  const Wire sum = nor(nor(t, m1), nor(cin, m1));
  const Wire carry = nor(n1, m1);
  return {sum, carry};
}

Word CircuitBuilder::add(const Word& a, const Word& b, Wire cin) {
  const std::size_t n = std::max(a.size(), b.size());
  Word out;
  out.reserve(n + 1);
  Wire c = cin;
  for (std::size_t i = 0; i < n; ++i) {
    const Wire x = i < a.size() ? a[i] : zero();
    const Wire y = i < b.size() ? b[i] : zero();
    const auto sc = full_add(x, y, c);
    out.push_back(sc.sum);
    c = sc.carry;
  }
  out.push_back(c);
  return out;
}

Word CircuitBuilder::sign_extend(const Word& a, unsigned width) {
  Word out(a.begin(), a.begin() + std::min<std::size_t>(a.size(), width));
  const Wire sign = a.empty() ? zero() : a.back();
  while (out.size() < width) out.push_back(sign);
  return out;
}

Word CircuitBuilder::shift_left(const Word& a, unsigned k) {
  Word out(k, zero());
  out.insert(out.end(), a.begin(), a.end());
  return out;
}

Word CircuitBuilder::shift_right_arith(const Word& a, unsigned k) {
  if (a.empty()) return a;
  Word out;
  for (std::size_t i = k; i < a.size(); ++i) out.push_back(a[i]);
  while (out.size() < a.size()) out.push_back(a.back());
  return out;
}

Word CircuitBuilder::constant_word(std::int64_t value, unsigned width) {
  Word out;
  for (unsigned i = 0; i < width; ++i) {
    out.push_back(constant(((static_cast<std::uint64_t>(value) >> std::min(i, 63u)) & 1u) != 0));
  }
  return out;
}

Word CircuitBuilder::add_signed(const Word& a, const Word& b, unsigned width) {
  Word s = add(sign_extend(a, width), sign_extend(b, width), zero());
  s.resize(width);
  return s;
}

Word CircuitBuilder::sub_signed(const Word& a, const Word& b, unsigned width) {
  Word nb = sign_extend(b, width);
  for (auto& w : nb) w = not_(w);
  Word s = add(sign_extend(a, width), nb, one());
  s.resize(width);
  return s;
}

Word CircuitBuilder::mul_const(const Word& x, std::int64_t c, unsigned width) {
  // Non-adjacent form keeps the number of partial products minimal.
  std::vector<int> digits;
  for (std::int64_t v = c; v != 0;) {
    int d = 0;
    if (v & 1) {
      d = 2 - static_cast<int>(((v % 4) + 4) % 4);
      v -= d;
    }
    digits.push_back(d);
    v /= 2;
  }
  const Word ext = sign_extend(x, width);
  Word acc;
  bool have = false;
  for (unsigned k = 0; k < digits.size(); ++k) {
    if (digits[k] == 0) continue;
    Word term = shift_left(ext, k);
    term.resize(width);
    if (!have) {
      acc = digits[k] > 0 ? term : sub_signed(constant_word(0, width), term, width);
      have = true;
    } else {
      acc = digits[k] > 0 ? add_signed(acc, term, width) : sub_signed(acc, term, width);
    }
  }
  return have ? acc : constant_word(0, width);
}

void CircuitBuilder::output(Wire w, const std::string& name) {
  outputs_.emplace_back(w, name);
  if (w.id >= kGateBase) preferred_names_.emplace(w.id, name);
}

void CircuitBuilder::output_word(const Word& w, const std::string& prefix) {
  for (std::size_t i = 0; i < w.size(); ++i) output(w[i], prefix + std::to_string(i));
}

NorNetlist CircuitBuilder::build() const {
  const auto inputs = static_cast<std::int64_t>(input_names_.size());
  const bool needs_const = std::any_of(outputs_.begin(), outputs_.end(),
                                       [](const auto& o) { return o.first.is_const(); });
  if (needs_const && inputs == 0) throw NetlistError(0, "constant output needs at least one input");

  std::vector<std::uint8_t> live(gates_.size(), 0);
  for (const auto& [w, name] : outputs_) {
    if (w.id >= kGateBase) live[static_cast<std::size_t>(w.id - kGateBase)] = 1;
  }
  for (std::size_t g = gates_.size(); g-- > 0;) {
    if (!live[g]) continue;
    for (std::int64_t in : {gates_[g].a, gates_[g].b}) {
      if (in >= kGateBase) live[static_cast<std::size_t>(in - kGateBase)] = 1;
    }
  }

  NorNetlist net;
  std::unordered_set<std::string> used;
  for (const auto& n : input_names_) {
    net.add_input(n);
    used.insert(n);
  }
  std::vector<SignalId> signal(gates_.size(), 0);
  auto resolve = [&](std::int64_t id) -> SignalId {
    return id >= kGateBase ? signal[static_cast<std::size_t>(id - kGateBase)]
                           : static_cast<SignalId>(id);
  };
  std::size_t counter = 0;
  auto fresh = [&]() {
    std::string n;
    do n = "g" + std::to_string(counter++);
    while (used.count(n));
    used.insert(n);
    return n;
  };
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    if (!live[g]) continue;
    std::string name;
    auto it = preferred_names_.find(kGateBase + static_cast<std::int64_t>(g));
    if (it != preferred_names_.end() && !used.count(it->second)) {
      name = it->second;
      used.insert(name);
    } else {
      name = fresh();
    }
    signal[g] = net.add_gate(name, resolve(gates_[g].a), resolve(gates_[g].b));
  }

  SignalId zero_sig = 0;
  SignalId one_sig = 0;
  if (needs_const) {
    const SignalId not_x = net.add_gate(fresh(), 0, 0);
    zero_sig = net.add_gate(fresh(), 0, not_x);
    const bool needs_one = std::any_of(outputs_.begin(), outputs_.end(), [](const auto& o) {
      return o.first.is_const() && o.first.const_value();
    });
    if (needs_one) one_sig = net.add_gate(fresh(), zero_sig, zero_sig);
  }
  for (const auto& [w, name] : outputs_) {
    if (w.is_const()) {
      net.add_output(w.const_value() ? one_sig : zero_sig);
    } else {
      net.add_output(resolve(w.id));
    }
  }
  return net;
}

}  // namespace pimecc
