#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace mcooks {

/// Philox4x32-10 block function (Salmon et al.). Pure: the same counter and
/// key always produce the same four words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Mixes two 64-bit values into a new, well-scrambled 64-bit seed
/// (splitmix64 finaliser over a keyed combination).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) noexcept;

/// Counter-based engine. A (seed, stream) pair names an independent sequence;
/// the position counter makes the sequence reproducible no matter which
/// thread consumes it. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint32_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t position_ = 0;
  std::array<std::uint32_t, 4> block_{};
  unsigned used_ = 4;
};

}  // namespace mcooks
