#include "pimecc/workloads.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pimecc/circuit_builder.hpp"
#include "pimecc/errors.hpp"

namespace pimecc {

void FixedPointFormat::validate() const {
  if (!(fraction_bits >= 1 && fraction_bits < total_bits && total_bits <= 32)) {
    throw ConfigError("fixed-point format needs 1 <= fraction_bits < total_bits <= 32");
  }
}

double FixedPointFormat::lsb() const { return std::ldexp(1.0, -static_cast<int>(fraction_bits)); }

NorNetlist gen_adder(unsigned bits) {
  if (bits == 0 || bits > 64) throw NetlistError(0, "adder width must be in [1, 64]");
  CircuitBuilder b;
  const auto a = b.input_word("a", bits);
  const auto x = b.input_word("b", bits);
  const auto cin = b.input("cin");
  const auto s = b.add(a, x, cin);
  for (unsigned i = 0; i < bits; ++i) b.output(s[i], "s" + std::to_string(i));
  b.output(s[bits], "cout");
  return b.build();
}

NorNetlist gen_multiplier(unsigned bits) {
  if (bits == 0 || bits > 32) throw NetlistError(0, "multiplier width must be in [1, 32]");
  CircuitBuilder b;
  const auto a = b.input_word("a", bits);
  const auto x = b.input_word("b", bits);
  CircuitBuilder::Word acc(2 * bits, CircuitBuilder::zero());
  for (unsigned i = 0; i < bits; ++i) {
    CircuitBuilder::Word partial(2 * bits, CircuitBuilder::zero());
    for (unsigned j = 0; j < bits; ++j) partial[i + j] = b.and_(a[j], x[i]);
    acc = b.add(acc, partial, CircuitBuilder::zero());
    acc.resize(2 * bits);
  }
  b.output_word(acc, "p");
  return b.build();
}

unsigned twiddle_fraction_bits(FixedPointFormat fmt) { return fmt.total_bits - 2; }

std::int64_t fft_input_limit(FixedPointFormat fmt) {
  return std::int64_t{1} << (fmt.total_bits - 2);
}

namespace {

void check_points(unsigned points) {
  if (points < 2 || points > 1024 || !std::has_single_bit(points)) {
    throw NetlistError(0, "FFT size must be a power of two in [2, 1024]");
  }
}

struct Twiddle {
  std::int64_t re;
  std::int64_t im;
};

Twiddle twiddle(unsigned k, unsigned points, unsigned frac) {
  const double angle = -2.0 * std::numbers::pi * k / points;
  const double scale = std::ldexp(1.0, static_cast<int>(frac));
  return {static_cast<std::int64_t>(std::llround(std::cos(angle) * scale)),
          static_cast<std::int64_t>(std::llround(std::sin(angle) * scale))};
}

unsigned bit_reverse(unsigned v, unsigned bits) {
  unsigned r = 0;
  for (unsigned i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
  return r;
}

// Two's-complement wrap to `width` bits.
std::int64_t wrap(std::int64_t v, unsigned width) {
  const std::uint64_t mask = width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
  std::uint64_t u = static_cast<std::uint64_t>(v) & mask;
  if (width < 64 && (u >> (width - 1)) & 1u) u |= ~mask;
  return static_cast<std::int64_t>(u);
}

// Arithmetic shift right (floor division by 2^k).
std::int64_t floor_shift(std::int64_t v, unsigned k) { return v >> k; }

}  // namespace

NorNetlist gen_fft(unsigned points, FixedPointFormat fmt) {
  check_points(points);
  fmt.validate();
  const unsigned w = fmt.total_bits;
  const unsigned t = twiddle_fraction_bits(fmt);
  const unsigned wide = w + t + 2;
  const unsigned stages = static_cast<unsigned>(std::countr_zero(points));

  using Word = CircuitBuilder::Word;
  CircuitBuilder b;
  std::vector<Word> re(points), im(points);
  for (unsigned n = 0; n < points; ++n) re[n] = b.input_word("xr" + std::to_string(n) + "_", w);
  for (unsigned n = 0; n < points; ++n) im[n] = b.input_word("xi" + std::to_string(n) + "_", w);

  std::vector<Word> xr(points), xi(points);
  for (unsigned n = 0; n < points; ++n) {
    xr[n] = re[bit_reverse(n, stages)];
    xi[n] = im[bit_reverse(n, stages)];
  }

  for (unsigned m = 2; m <= points; m *= 2) {
    const unsigned half = m / 2;
    for (unsigned base = 0; base < points; base += m) {
      for (unsigned j = 0; j < half; ++j) {
        const Twiddle c = twiddle(j * (points / m), points, t);
        const unsigned ia = base + j;
        const unsigned ib = base + j + half;
        Word tr = b.sub_signed(b.mul_const(xr[ib], c.re, wide), b.mul_const(xi[ib], c.im, wide), wide);
        Word ti = b.add_signed(b.mul_const(xr[ib], c.im, wide), b.mul_const(xi[ib], c.re, wide), wide);
        tr = CircuitBuilder::shift_right_arith(tr, t);
        ti = CircuitBuilder::shift_right_arith(ti, t);
        tr.resize(w + 1);
        ti.resize(w + 1);

        auto combine = [&](const Word& a, const Word& d, bool subtract) {
          Word s = subtract ? b.sub_signed(a, d, w + 1) : b.add_signed(a, d, w + 1);
          s = CircuitBuilder::shift_right_arith(s, 1);
          s.resize(w);
          return s;
        };
        Word ar = xr[ia], ai = xi[ia];
        xr[ia] = combine(ar, tr, false);
        xi[ia] = combine(ai, ti, false);
        xr[ib] = combine(ar, tr, true);
        xi[ib] = combine(ai, ti, true);
      }
    }
  }
  for (unsigned k = 0; k < points; ++k) b.output_word(xr[k], "Xr" + std::to_string(k) + "_");
  for (unsigned k = 0; k < points; ++k) b.output_word(xi[k], "Xi" + std::to_string(k) + "_");
  return b.build();
}

std::vector<FixedComplex> fixed_fft_reference(std::span<const FixedComplex> x,
                                              FixedPointFormat fmt) {
  const auto points = static_cast<unsigned>(x.size());
  check_points(points);
  fmt.validate();
  const unsigned w = fmt.total_bits;
  const unsigned t = twiddle_fraction_bits(fmt);
  const unsigned stages = static_cast<unsigned>(std::countr_zero(points));

  std::vector<FixedComplex> v(points);
  for (unsigned n = 0; n < points; ++n) {
    const auto& s = x[bit_reverse(n, stages)];
    v[n] = {wrap(s.re, w), wrap(s.im, w)};
  }
  for (unsigned m = 2; m <= points; m *= 2) {
    const unsigned half = m / 2;
    for (unsigned base = 0; base < points; base += m) {
      for (unsigned j = 0; j < half; ++j) {
        const Twiddle c = twiddle(j * (points / m), points, t);
        FixedComplex& a = v[base + j];
        FixedComplex& d = v[base + j + half];
        const std::int64_t tr = wrap(floor_shift(d.re * c.re - d.im * c.im, t), w + 1);
        const std::int64_t ti = wrap(floor_shift(d.re * c.im + d.im * c.re, t), w + 1);
        const FixedComplex sum{wrap(floor_shift(wrap(a.re + tr, w + 1), 1), w),
                               wrap(floor_shift(wrap(a.im + ti, w + 1), 1), w)};
        const FixedComplex diff{wrap(floor_shift(wrap(a.re - tr, w + 1), 1), w),
                                wrap(floor_shift(wrap(a.im - ti, w + 1), 1), w)};
        a = sum;
        d = diff;
      }
    }
  }
  return v;
}

std::vector<Complex> dft_scaled(std::span<const Complex> x) {
  const std::size_t n = x.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double angle = -2.0 * std::numbers::pi * static_cast<double>((j * k) % n) /
                           static_cast<double>(n);
      acc += x[j] * Complex(std::cos(angle), std::sin(angle));
    }
    out[k] = acc / static_cast<double>(n);
  }
  return out;
}

std::vector<Complex> to_complex(std::span<const FixedComplex> x, FixedPointFormat fmt) {
  std::vector<Complex> out;
  out.reserve(x.size());
  const double lsb = fmt.lsb();
  for (const auto& v : x) out.emplace_back(v.re * lsb, v.im * lsb);
  return out;
}

std::int64_t decode_signed(std::span<const std::uint8_t> bits) {
  if (bits.empty()) return 0;
  std::uint64_t u = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) u |= std::uint64_t{bits[i] & 1u} << i;
  return wrap(static_cast<std::int64_t>(u), static_cast<unsigned>(bits.size()));
}

void encode_signed(std::int64_t value, unsigned width, Bits& out) {
  for (unsigned i = 0; i < width; ++i) {
    out.push_back(static_cast<std::uint8_t>((static_cast<std::uint64_t>(value) >> std::min(i, 63u)) & 1u));
  }
}

Bits fft_input_bits(std::span<const FixedComplex> x, FixedPointFormat fmt) {
  Bits bits;
  bits.reserve(x.size() * 2 * fmt.total_bits);
  for (const auto& v : x) encode_signed(v.re, fmt.total_bits, bits);
  for (const auto& v : x) encode_signed(v.im, fmt.total_bits, bits);
  return bits;
}

std::vector<FixedComplex> fft_output_values(std::span<const std::uint8_t> bits,
                                            FixedPointFormat fmt) {
  const std::size_t w = fmt.total_bits;
  if (bits.size() % (2 * w) != 0) throw std::invalid_argument("FFT output size mismatch");
  const std::size_t points = bits.size() / (2 * w);
  std::vector<FixedComplex> out(points);
  for (std::size_t k = 0; k < points; ++k) {
    out[k].re = decode_signed(bits.subspan(k * w, w));
    out[k].im = decode_signed(bits.subspan((points + k) * w, w));
  }
  return out;
}

std::vector<FixedComplex> random_fft_input(unsigned points, FixedPointFormat fmt,
                                           std::uint64_t seed) {
  const std::int64_t lim = fft_input_limit(fmt);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> dist(-lim, lim);
  std::vector<FixedComplex> out(points);
  for (auto& v : out) {
    v.re = dist(rng);
    v.im = dist(rng);
  }
  return out;
}

std::vector<FixedComplex> parse_fft_csv(std::string_view text, FixedPointFormat fmt) {
  fmt.validate();
  std::vector<FixedComplex> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  const double scale = std::ldexp(1.0, static_cast<int>(fmt.fraction_bits));
  auto convert = [&](const std::string& field) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(field, &used);
    } catch (const std::exception&) {
      throw ConfigError("FFT CSV line " + std::to_string(line_no) + ": bad number '" + field + "'");
    }
    const auto q = static_cast<std::int64_t>(std::llround(v * scale));
    if (q < fmt.min_value() || q > fmt.max_value()) {
      throw ConfigError("FFT CSV line " + std::to_string(line_no) + ": value out of range");
    }
    return q;
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#' || line == "real,imag") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("FFT CSV line " + std::to_string(line_no) + ": expected real,imag");
    }
    out.push_back({convert(line.substr(0, comma)), convert(line.substr(comma + 1))});
  }
  return out;
}

std::string format_fft_csv(std::span<const FixedComplex> x, FixedPointFormat fmt) {
  std::ostringstream os;
  os << "real,imag\n";
  os.precision(17);
  for (const auto& v : x) os << v.re * fmt.lsb() << ',' << v.im * fmt.lsb() << '\n';
  return os.str();
}

double sqnr_db(std::span<const Complex> expected, std::span<const Complex> experimental) {
  if (expected.size() != experimental.size()) {
    throw std::invalid_argument("SQNR operands differ in length");
  }
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    signal += std::norm(expected[i]);
    noise += std::norm(experimental[i] - expected[i]);
  }
  if (signal == 0.0) throw std::invalid_argument("SQNR undefined for zero expected power");
  if (noise == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / noise);
}

double fft_quantization_floor_db(unsigned points, FixedPointFormat fmt) {
  return 6.02 * (static_cast<double>(fmt.fraction_bits) - std::log2(static_cast<double>(points))) +
         1.76;
}

NorNetlist gen_random(std::size_t gates, std::size_t inputs, std::uint64_t seed) {
  if (gates == 0 || inputs == 0) throw NetlistError(0, "random netlist needs gates and inputs");
  std::mt19937_64 rng(seed);
  NorNetlist net;
  for (std::size_t i = 0; i < inputs; ++i) net.add_input("i" + std::to_string(i));
  std::vector<std::uint8_t> read(inputs + gates, 0);
  for (std::size_t g = 0; g < gates; ++g) {
    const std::size_t avail = inputs + g;
    // Favor recent signals so the DAG has depth, but reach back anywhere.
    std::uniform_int_distribution<std::size_t> any(0, avail - 1);
    std::uniform_int_distribution<std::size_t> recent(avail - std::min<std::size_t>(avail, 4), avail - 1);
    std::bernoulli_distribution pick_recent(0.5);
    SignalId a = static_cast<SignalId>(pick_recent(rng) ? recent(rng) : any(rng));
    SignalId c = static_cast<SignalId>(any(rng));
    if (c == a && avail > 1) c = static_cast<SignalId>((c + 1) % avail);
    read[a] = read[c] = 1;
    net.add_gate("n" + std::to_string(g), a, c);
  }
  for (std::size_t g = 0; g < gates; ++g) {
    if (!read[inputs + g]) net.add_output(net.gate_signal(g));
  }
  return net;
}

}  // namespace pimecc
