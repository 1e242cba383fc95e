#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pimecc/circuit_builder.hpp"
#include "pimecc/errors.hpp"
#include "pimecc/netlist.hpp"
#include "pimecc/workloads.hpp"

namespace pimecc {
namespace {

std::uint64_t word_value(const Bits& out, std::size_t lo, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= std::uint64_t{out[lo + i]} << i;
  return v;
}

TEST(GenAdder, ExhaustiveFourBit) {
  const auto net = gen_adder(4);
  EXPECT_EQ(net.input_count(), 9u);
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      for (unsigned c = 0; c < 2; ++c) {
        Bits in(9);
        for (unsigned i = 0; i < 4; ++i) {
          in[i] = (a >> i) & 1u;
          in[4 + i] = (b >> i) & 1u;
        }
        in[8] = static_cast<std::uint8_t>(c);
        EXPECT_EQ(word_value(evaluate(net, in), 0, 5), a + b + c);
      }
    }
  }
}

TEST(GenMultiplier, ExhaustiveFourBit) {
  const auto net = gen_multiplier(4);
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      Bits in(8);
      for (unsigned i = 0; i < 4; ++i) {
        in[i] = (a >> i) & 1u;
        in[4 + i] = (b >> i) & 1u;
      }
      EXPECT_EQ(word_value(evaluate(net, in), 0, 8), a * b);
    }
  }
}

TEST(GenMultiplier, RandomTwelveBit) {
  const auto net = gen_multiplier(12);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const unsigned a = rng() & 0xfff, b = rng() & 0xfff;
    Bits in(24);
    for (unsigned i = 0; i < 12; ++i) {
      in[i] = (a >> i) & 1u;
      in[12 + i] = (b >> i) & 1u;
    }
    EXPECT_EQ(word_value(evaluate(net, in), 0, 24), std::uint64_t{a} * b);
  }
}

TEST(GenRandom, ShapeAndDeterminism) {
  const auto a = gen_random(64, 8, 7);
  EXPECT_EQ(a.gate_count(), 64u);
  EXPECT_EQ(a.input_count(), 8u);
  EXPECT_FALSE(a.outputs().empty());
  EXPECT_EQ(a, gen_random(64, 8, 7));
  EXPECT_FALSE(a == gen_random(64, 8, 8));
  EXPECT_THROW(gen_random(0, 3, 1), NetlistError);
}

TEST(CircuitBuilder, FoldsConstantsAndHashes) {
  CircuitBuilder b;
  const auto x = b.input("x");
  EXPECT_EQ(b.nor(x, CircuitBuilder::one()), CircuitBuilder::zero());
  EXPECT_EQ(b.nor(CircuitBuilder::zero(), CircuitBuilder::zero()), CircuitBuilder::one());
  const auto y = b.input("y");
  const auto g1 = b.nor(x, y);
  EXPECT_EQ(b.nor(y, x), g1);
  EXPECT_EQ(b.not_(b.not_(x)), x);
  EXPECT_EQ(b.gate_count(), 2u);  // NOR(x,y) and NOT x
}

TEST(CircuitBuilder, MulConstIsExact) {
  for (std::int64_t c : {-93, -1, 0, 1, 3, 45, 90, 127}) {
    CircuitBuilder b;
    const auto x = b.input_word("x", 8);
    b.output_word(b.mul_const(x, c, 16), "y");
    const auto net = b.build();
    for (int v = -128; v < 128; ++v) {
      Bits in;
      encode_signed(v, 8, in);
      EXPECT_EQ(decode_signed(evaluate(net, in)), v * c) << "c=" << c << " v=" << v;
    }
  }
}

TEST(CircuitBuilder, ConstantOutputsMaterialize) {
  CircuitBuilder b;
  const auto x = b.input("x");
  b.output(CircuitBuilder::one(), "hi");
  b.output(CircuitBuilder::zero(), "lo");
  b.output(x, "x_out");
  const auto net = b.build();
  for (std::uint8_t v : {0, 1}) EXPECT_EQ(evaluate(net, Bits{v}), (Bits{1, 0, v}));
}

TEST(SignedCoding, RoundTrips) {
  for (int v = -32; v < 32; ++v) {
    Bits b;
    encode_signed(v, 6, b);
    EXPECT_EQ(b.size(), 6u);
    EXPECT_EQ(decode_signed(b), v);
  }
}

TEST(FixedPointFormat, ValidatesAndBounds) {
  const FixedPointFormat f{8, 7};
  EXPECT_NO_THROW(f.validate());
  EXPECT_EQ(f.min_value(), -128);
  EXPECT_EQ(f.max_value(), 127);
  EXPECT_DOUBLE_EQ(f.lsb(), 1.0 / 128);
  EXPECT_THROW((FixedPointFormat{8, 8}.validate()), ConfigError);
  EXPECT_THROW((FixedPointFormat{8, 0}.validate()), ConfigError);
}

TEST(GenFft, MatchesBitExactReference) {
  const FixedPointFormat fmt{8, 7};
  for (unsigned n : {2u, 4u, 8u, 16u}) {
    const auto net = gen_fft(n, fmt);
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      const auto x = random_fft_input(n, fmt, seed);
      const auto got = fft_output_values(evaluate(net, fft_input_bits(x, fmt)), fmt);
      EXPECT_EQ(got, fixed_fft_reference(x, fmt)) << "n=" << n << " seed=" << seed;
    }
  }
  EXPECT_THROW(gen_fft(12, fmt), NetlistError);
  EXPECT_THROW(gen_fft(1, fmt), NetlistError);
}

TEST(GenFft, SixteenPointGateCount) {
  const auto net = gen_fft(16, FixedPointFormat{8, 7});
  EXPECT_EQ(net.input_count(), 16u * 2 * 8);
  EXPECT_EQ(net.outputs().size(), 16u * 2 * 8);
  EXPECT_GT(net.gate_count(), 10000u);
  EXPECT_LT(net.gate_count(), 40000u);
}

TEST(GenFft, ImpulseGivesFlatSpectrum) {
  const FixedPointFormat fmt{8, 7};
  std::vector<FixedComplex> x(8);
  x[0] = {32, 0};  // 0.25
  const auto y = fixed_fft_reference(x, fmt);
  for (const auto& v : y) {
    EXPECT_NEAR(static_cast<double>(v.re) * fmt.lsb(), 0.25 / 8, fmt.lsb());
    EXPECT_NEAR(static_cast<double>(v.im) * fmt.lsb(), 0.0, fmt.lsb());
  }
}

TEST(DftScaled, MatchesDirectSum) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Complex> x(8);
  for (auto& v : x) v = {u(rng), u(rng)};
  const auto y = dft_scaled(x);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < 8; ++k) {
    Complex s = 0;
    for (std::size_t n = 0; n < 8; ++n) s += x[n] * std::polar(1.0, -2 * pi * double(k * n) / 8);
    EXPECT_NEAR(std::abs(y[k] - s / 8.0), 0.0, 1e-12);
  }
}

// Pooled SQNR over many random inputs stays above the quantization floor.
TEST(GenFft, PooledSqnrAboveQuantizationFloor) {
  const FixedPointFormat fmt{8, 7};
  for (unsigned n : {16u, 64u}) {
    double signal = 0, noise = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto x = random_fft_input(n, fmt, seed);
      const auto ref = dft_scaled(to_complex(x, fmt));
      const auto got = to_complex(fixed_fft_reference(x, fmt), fmt);
      for (std::size_t i = 0; i < n; ++i) {
        signal += std::norm(ref[i]);
        noise += std::norm(got[i] - ref[i]);
      }
    }
    EXPECT_GT(10 * std::log10(signal / noise), fft_quantization_floor_db(n, fmt)) << n;
  }
}

TEST(Sqnr, EdgeCases) {
  const std::vector<Complex> a = {{1, 0}, {0, 1}};
  EXPECT_TRUE(std::isinf(sqnr_db(a, a)));
  const std::vector<Complex> b = {{1.1, 0}, {0, 1}};
  EXPECT_NEAR(sqnr_db(a, b), 10 * std::log10(2.0 / 0.01), 1e-9);
  EXPECT_THROW(sqnr_db(a, std::vector<Complex>{{1, 0}}), std::invalid_argument);
  EXPECT_THROW(sqnr_db(std::vector<Complex>{{0, 0}}, std::vector<Complex>{{1, 0}}), std::invalid_argument);
}

TEST(FftCsv, RoundTripAndErrors) {
  const FixedPointFormat fmt{8, 7};
  const auto x = random_fft_input(8, fmt, 3);
  EXPECT_EQ(parse_fft_csv(format_fft_csv(x, fmt), fmt), x);
  EXPECT_EQ(parse_fft_csv("real,imag\n# note\n0.5,-0.25\n", fmt), (std::vector<FixedComplex>{{64, -32}}));
  EXPECT_THROW(parse_fft_csv("0.5\n", fmt), ConfigError);
  EXPECT_THROW(parse_fft_csv("abc,0\n", fmt), ConfigError);
  EXPECT_THROW(parse_fft_csv("2.0,0\n", fmt), ConfigError);
}

}  // namespace
}  // namespace pimecc
