#pragma once

#include <cstdint>
#include <string_view>

namespace pardoc::rng {

// splitmix64: tiny, statistically solid, and stable across platforms.
// All randomness in the toolkit derives from it so runs are reproducible
// from a single seed.
inline std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  return splitmix(s);
}

inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed = 0) {
  std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Deterministic per-(seed, tag, index) stream head, used to derive
// independent sub-seeds for trials, spans, positions, ...
inline std::uint64_t derive(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
  return mix(mix(seed, hash_bytes(tag)), index);
}

// Uniform draw in [0, n) without modulo bias worth caring about at toy scale.
inline std::uint64_t bounded(std::uint64_t& state, std::uint64_t n) {
  return splitmix(state) % n;
}

inline double unit_real(std::uint64_t& state) {
  return static_cast<double>(splitmix(state) >> 11) * (1.0 / 9007199254740992.0);
}

}  // namespace pardoc::rng
