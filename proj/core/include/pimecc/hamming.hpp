#pragma once

// Systematic Hamming codes: codeword = [data (k bits) | parity (n-k bits)],
// parity = A^T * data over GF(2), parity-check matrix H = [A^T | I].

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pimecc {

using Bits = std::vector<std::uint8_t>;  // one 0/1 value per element

struct Correction {
  Bits data;
  std::optional<std::size_t> corrected_position;  // codeword index that was flipped
  bool uncorrectable = false;                     // syndrome matches no single flip
};

class HammingCode {
 public:
  /// Smallest systematic Hamming code carrying `k` data bits. Data columns of
  /// H enumerate the non-unit nonzero (n-k)-bit vectors in increasing value;
  /// shortened codes drop the highest ones. Throws CodeError when k == 0.
  static HammingCode build(std::size_t k);

  std::size_t k() const noexcept { return k_; }
  std::size_t n() const noexcept { return k_ + r_; }
  std::size_t parity_bits() const noexcept { return r_; }

  /// H column of codeword position `pos` as an (n-k)-bit mask (bit i is
  /// parity i). Data positions come first.
  std::uint32_t column(std::size_t pos) const;

  /// A[j][i]: data bit j contributes to parity i.
  bool a(std::size_t j, std::size_t i) const { return (data_cols_.at(j) >> i) & 1u; }

  /// Parity indices that change when data bit j changes (row j of A).
  std::vector<std::size_t> affected_parities(std::size_t j) const;

  Bits encode(std::span<const std::uint8_t> data) const;
  Bits parity_of(std::span<const std::uint8_t> data) const;

  std::uint32_t syndrome_mask(std::span<const std::uint8_t> codeword) const;
  Bits syndrome(std::span<const std::uint8_t> codeword) const;

  /// Codeword position a single flip at which yields `syndrome`.
  std::optional<std::size_t> position_for(std::uint32_t syndrome) const;

  /// Zero syndrome returns the data untouched; a realizable syndrome flips the
  /// indicated position; anything else is reported uncorrectable.
  Correction correct(std::span<const std::uint8_t> codeword) const;

 private:
  std::size_t k_ = 0;
  std::size_t r_ = 0;
  std::vector<std::uint32_t> data_cols_;
  std::vector<std::int64_t> syndrome_table_;  // syndrome -> position, -1 if none
};

/// XOR reduction; 0 for an empty vector.
bool parity_bit(std::span<const std::uint8_t> bits);

}  // namespace pimecc
