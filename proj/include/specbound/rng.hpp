#pragma once

#include <cstdint>

namespace specbound {

/// Counter-based generator: output i of stream s is a fixed mixing function of
/// (seed, s, i), so per-sample streams are independent of execution order and
/// thread count. The mixer is the splitmix64 finalizer. Normal deviates come
/// from the Box-Muller transform (pairs are cached).
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  /// Uniform in (0, 1].
  double next_uniform();
  /// Standard normal.
  double next_normal();

  static std::uint64_t mix(std::uint64_t z);

private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace specbound
