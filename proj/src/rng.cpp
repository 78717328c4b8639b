#include "execbarrier/rng.hpp"

#include <cmath>
#include <numbers>

namespace execbarrier {

namespace {

constexpr std::uint32_t kMulA = 0xD2511F53;
constexpr std::uint32_t kMulB = 0xCD9E8D57;
constexpr std::uint32_t kWeylA = 0x9E3779B9;
constexpr std::uint32_t kWeylB = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(product);
  hi = static_cast<std::uint32_t>(product >> 32);
}

// Uniform on the open interval (0, 1) with 53 significant bits.
inline double open_unit(std::uint32_t hi_word, std::uint32_t lo_word) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi_word) << 32 | lo_word) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeylA;
      key[1] += kWeylB;
    }
    std::uint32_t lo0, hi0, lo1, hi1;
    mulhilo(kMulA, ctr[0], lo0, hi0);
    mulhilo(kMulB, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

NormalStream::NormalStream(std::uint64_t master_seed, std::uint64_t path_index)
    : key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)},
      path_(path_index) {}

std::array<double, 2> NormalStream::pair(std::uint64_t block) const {
  const Philox4x32::Counter out = Philox4x32::block(
      {static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
       static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32)},
      key_);
  const double u1 = open_unit(out[0], out[1]);
  const double u2 = open_unit(out[2], out[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

double NormalStream::next() {
  if ((position_ & 1U) == 0) cached_ = pair(position_ >> 1);
  return cached_[position_++ & 1U];
}

double NormalStream::at(std::uint64_t index) const { return pair(index >> 1)[index & 1U]; }

}  // namespace execbarrier
