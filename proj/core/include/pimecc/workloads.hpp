#pragma once

// Benchmark circuit generators, the fixed-point FFT reference and the SQNR
// metric.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pimecc/netlist.hpp"

namespace pimecc {

struct FixedPointFormat {
  unsigned total_bits = 8;
  unsigned fraction_bits = 7;

  /// Throws ConfigError unless 1 <= fraction_bits < total_bits <= 32.
  void validate() const;
  double lsb() const;
  std::int64_t min_value() const { return -(std::int64_t{1} << (total_bits - 1)); }
  std::int64_t max_value() const { return (std::int64_t{1} << (total_bits - 1)) - 1; }
};

/// bits-wide ripple-carry adder. Inputs a0.., b0.., cin; outputs s0.., cout.
NorNetlist gen_adder(unsigned bits);

/// Unsigned shift-add multiplier. Inputs a0.., b0..; outputs p0..p(2*bits-1).
NorNetlist gen_multiplier(unsigned bits);

/// Radix-2 decimation-in-time FFT computing DFT(x)/points with per-stage
/// halving and truncation. Inputs xr<n>_<bit>, xi<n>_<bit>; outputs
/// Xr<k>_<bit>, Xi<k>_<bit>, all two's complement, bit 0 first. Throws
/// NetlistError unless points is a power of two in [2, 1024].
NorNetlist gen_fft(unsigned points, FixedPointFormat fmt);

/// Random NOR DAG: each gate reads two earlier signals; every signal that no
/// gate reads becomes an output.
NorNetlist gen_random(std::size_t gates, std::size_t inputs, std::uint64_t seed);

/// Fraction bits of the baked-in twiddle constants.
unsigned twiddle_fraction_bits(FixedPointFormat fmt);

/// Largest input magnitude (per component) that keeps every FFT stage free
/// of overflow.
std::int64_t fft_input_limit(FixedPointFormat fmt);

struct FixedComplex {
  std::int64_t re = 0;
  std::int64_t im = 0;
  friend bool operator==(const FixedComplex&, const FixedComplex&) = default;
};

using Complex = std::complex<double>;

/// Bit-exact software model of gen_fft's arithmetic.
std::vector<FixedComplex> fixed_fft_reference(std::span<const FixedComplex> x,
                                              FixedPointFormat fmt);

/// Double-precision DFT scaled by 1/N (the quantity gen_fft approximates).
std::vector<Complex> dft_scaled(std::span<const Complex> x);

std::vector<Complex> to_complex(std::span<const FixedComplex> x, FixedPointFormat fmt);

/// Input assignment of gen_fft for the given samples.
Bits fft_input_bits(std::span<const FixedComplex> x, FixedPointFormat fmt);
/// Decodes gen_fft's output bits.
std::vector<FixedComplex> fft_output_values(std::span<const std::uint8_t> bits,
                                            FixedPointFormat fmt);

/// Uniform random samples with |re|, |im| <= fft_input_limit(fmt).
std::vector<FixedComplex> random_fft_input(unsigned points, FixedPointFormat fmt,
                                           std::uint64_t seed);

/// CSV with one "real,imag" line per sample, values in real units; each is
/// rounded to the format and range-checked. '#' lines and a header
/// "real,imag" are skipped.
std::vector<FixedComplex> parse_fft_csv(std::string_view text, FixedPointFormat fmt);
std::string format_fft_csv(std::span<const FixedComplex> x, FixedPointFormat fmt);

/// 10*log10(sum |e|^2 / sum |x - e|^2). Returns +infinity when the vectors
/// are equal; throws std::invalid_argument for unequal lengths or zero
/// expected power.
double sqnr_db(std::span<const Complex> expected, std::span<const Complex> experimental);

/// Quantization floor for gen_fft: 6.02 * (fraction_bits - log2(points)) + 1.76.
double fft_quantization_floor_db(unsigned points, FixedPointFormat fmt);

/// Signed value of a two's-complement bit slice.
std::int64_t decode_signed(std::span<const std::uint8_t> bits);
void encode_signed(std::int64_t value, unsigned width, Bits& out);

}  // namespace pimecc
