#pragma once

#include <cstdint>
#include <random>

namespace elicit {

/// Deterministic per-index seed stream: splitmix64 of (master, index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Seeded generator with a portable uniform draw (53 random mantissa bits),
/// so sampled points do not depend on the standard library's distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t index(std::size_t bound) { return static_cast<std::size_t>(uniform() * bound) % bound; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace elicit
