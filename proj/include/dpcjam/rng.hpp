#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

namespace dpcjam {

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for one unit of work, derived from a tag (claim id, chunk kind), a
/// user seed and an index. Independent of thread scheduling.
std::uint64_t derive_seed(std::string_view tag, std::uint64_t seed, std::uint64_t index);

/// Bit-reproducible generator: mt19937_64 with hand-rolled uniform and
/// Marsaglia polar normal transforms (the std distributions are
/// implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

}  // namespace dpcjam
