#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace chainkit {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
///
/// Each (key, stream) pair names an independent sequence, so replication r of
/// a Monte Carlo run can draw from `Philox4x32(seed, r)` regardless of which
/// thread computes it. Satisfies UniformRandomBitGenerator.
class Philox4x32 {
 public:
  using result_type = std::uint32_t;
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  Philox4x32(std::uint64_t key, std::uint64_t stream) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// The bijection itself: ten Philox rounds applied to `counter` under `key`.
  static Counter block(Counter counter, Key key) noexcept;

 private:
  Key key_{};
  Counter counter_{};
  Counter buffer_{};
  unsigned next_ = 4;
};

}  // namespace chainkit
