#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ucband {

using Rng = std::mt19937_64;

// splitmix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream tags keep unrelated consumers of one master seed apart.
enum class Stream : std::uint64_t {
  multiplier = 1,
  gaussian = 2,
  sample = 3,
  battery = 4,
};

/// Seed of child stream `index` under `master`. Depends only on its inputs,
/// never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t master, Stream tag,
                                    std::uint64_t index) noexcept {
  return mix64(mix64(master ^ mix64(static_cast<std::uint64_t>(tag))) + index);
}

inline Rng child_rng(std::uint64_t master, Stream tag, std::uint64_t index) {
  return Rng(derive_seed(master, tag, index));
}

inline void fill_standard_normal(Rng& rng, std::span<double> out) {
  std::normal_distribution<double> norm(0.0, 1.0);
  for (double& v : out) v = norm(rng);
}

}  // namespace ucband
