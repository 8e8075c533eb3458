#pragma once

// Reproducible randomness. Every consumer draws from its own stream, keyed by
// (seed, purpose tag, index), so results do not depend on evaluation order or
// on how work is split across threads.

#include <cstdint>
#include <string_view>

namespace swcp {

// SplitMix64 finalizer (stateless mixing step).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stream key for (seed, purpose, index). Distinct purpose tags give
// independent streams even under the same seed.
inline std::uint64_t derive_stream_key(std::uint64_t seed, std::string_view purpose,
                                       std::uint64_t index) {
  std::uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ULL);
  key = mix64(key ^ fnv1a64(purpose));
  key = mix64(key ^ (index + 0x9e3779b97f4a7c15ULL));
  return key;
}

// xoshiro256** seeded through a SplitMix64 chain.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t key) {
    std::uint64_t sm = key;
    for (auto& word : state_) {
      sm += 0x9e3779b97f4a7c15ULL;
      word = mix64(sm);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
  }

  StreamRng(std::uint64_t seed, std::string_view purpose, std::uint64_t index = 0)
      : StreamRng(derive_stream_key(seed, purpose, index)) {}

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 random bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_unit() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

}  // namespace swcp
