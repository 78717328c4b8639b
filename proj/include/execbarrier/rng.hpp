#pragma once

#include <array>
#include <cstdint>

namespace execbarrier {

/// Philox4x32-10 block function (Salmon et al., "Parallel random numbers:
/// as easy as 1, 2, 3"). Stateless: the output is a pure function of
/// (counter, key), which is what makes per-path streams order independent.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter counter, Key key);
};

/// Standard normal variates for one simulation path.
///
/// Variate j of path p under master seed m is fixed by (m, p, j) alone:
/// key = m, counter = (j / 2, p). Each Philox block yields two 53-bit
/// uniforms and one Box-Muller pair.
class NormalStream {
 public:
  NormalStream(std::uint64_t master_seed, std::uint64_t path_index);

  double next();

  /// Variate `index` of this stream without advancing it.
  double at(std::uint64_t index) const;

 private:
  std::array<double, 2> pair(std::uint64_t block) const;

  Philox4x32::Key key_;
  std::uint64_t path_;
  std::uint64_t position_ = 0;
  std::array<double, 2> cached_{};
};

}  // namespace execbarrier
