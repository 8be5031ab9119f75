#pragma once

#include <cstdint>
#include <string_view>

namespace chaospso {

/// splitmix64 finalizer (Steele, Lea, Flood 2014). Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Sequential splitmix64 generator; the counter advances by the golden gamma.
class SplitMix64 {
 public:
  constexpr explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1) with 53 random bits.
  constexpr double next_open_unit() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// FNV-1a over the bytes of `text`. Stable across platforms and runs.
constexpr std::uint64_t stable_hash(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Chains values into one seed: mix(...mix(mix(base ^ a) ^ b)...).
constexpr std::uint64_t combine_seed(std::uint64_t base, std::uint64_t value) noexcept {
  return mix64(base ^ mix64(value));
}

/// Seed for one PSO run, re-derivable from its identity alone.
constexpr std::uint64_t run_seed(std::uint64_t master_seed, std::string_view source_id,
                                 int function_id, std::uint64_t run_index) noexcept {
  std::uint64_t h = combine_seed(master_seed, stable_hash(source_id));
  h = combine_seed(h, static_cast<std::uint64_t>(function_id));
  return combine_seed(h, run_index);
}

}  // namespace chaospso
