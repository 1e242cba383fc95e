#include "pimecc/hamming.hpp"

#include <bit>
#include <string>

#include "pimecc/errors.hpp"

namespace pimecc {

HammingCode HammingCode::build(std::size_t k) {
  if (k == 0) throw CodeError("Hamming code needs at least one data bit");
  std::size_t r = 2;
  while (((std::size_t{1} << r) - r - 1) < k) ++r;

  HammingCode code;
  code.k_ = k;
  code.r_ = r;
  for (std::uint32_t v = 1; code.data_cols_.size() < k; ++v) {
    if (std::popcount(v) >= 2) code.data_cols_.push_back(v);
  }
  code.syndrome_table_.assign(std::size_t{1} << r, -1);
  for (std::size_t j = 0; j < k; ++j) {
    code.syndrome_table_[code.data_cols_[j]] = static_cast<std::int64_t>(j);
  }
  for (std::size_t i = 0; i < r; ++i) {
    code.syndrome_table_[std::size_t{1} << i] = static_cast<std::int64_t>(k + i);
  }
  return code;
}

std::uint32_t HammingCode::column(std::size_t pos) const {
  if (pos >= n()) throw CodeError("codeword position out of range");
  if (pos < k_) return data_cols_[pos];
  return std::uint32_t{1} << (pos - k_);
}

std::vector<std::size_t> HammingCode::affected_parities(std::size_t j) const {
  if (j >= k_) throw CodeError("data bit index " + std::to_string(j) + " out of range");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < r_; ++i) {
    if (a(j, i)) out.push_back(i);
  }
  return out;
}

Bits HammingCode::parity_of(std::span<const std::uint8_t> data) const {
  if (data.size() != k_) throw CodeError("data length does not match k");
  std::uint32_t acc = 0;
  for (std::size_t j = 0; j < k_; ++j) {
    if (data[j] & 1u) acc ^= data_cols_[j];
  }
  Bits p(r_);
  for (std::size_t i = 0; i < r_; ++i) p[i] = (acc >> i) & 1u;
  return p;
}

Bits HammingCode::encode(std::span<const std::uint8_t> data) const {
  Bits cw(data.begin(), data.end());
  const Bits p = parity_of(data);
  cw.insert(cw.end(), p.begin(), p.end());
  return cw;
}

std::uint32_t HammingCode::syndrome_mask(std::span<const std::uint8_t> codeword) const {
  if (codeword.size() != n()) throw CodeError("codeword length does not match n");
  std::uint32_t s = 0;
  for (std::size_t pos = 0; pos < codeword.size(); ++pos) {
    if (codeword[pos] & 1u) s ^= column(pos);
  }
  return s;
}

Bits HammingCode::syndrome(std::span<const std::uint8_t> codeword) const {
  const std::uint32_t s = syndrome_mask(codeword);
  Bits out(r_);
  for (std::size_t i = 0; i < r_; ++i) out[i] = (s >> i) & 1u;
  return out;
}

std::optional<std::size_t> HammingCode::position_for(std::uint32_t syndrome) const {
  if (syndrome == 0 || syndrome >= syndrome_table_.size()) return std::nullopt;
  const auto pos = syndrome_table_[syndrome];
  if (pos < 0) return std::nullopt;
  return static_cast<std::size_t>(pos);
}

Correction HammingCode::correct(std::span<const std::uint8_t> codeword) const {
  const std::uint32_t s = syndrome_mask(codeword);
  Correction out;
  out.data.assign(codeword.begin(), codeword.begin() + static_cast<std::ptrdiff_t>(k_));
  if (s == 0) return out;
  const auto pos = position_for(s);
  if (!pos) {
    out.uncorrectable = true;
    return out;
  }
  if (*pos < k_) out.data[*pos] ^= 1u;
  out.corrected_position = pos;
  return out;
}

bool parity_bit(std::span<const std::uint8_t> bits) {
  std::uint8_t acc = 0;
  for (auto b : bits) acc ^= (b & 1u);
  return acc != 0;
}

}  // namespace pimecc
