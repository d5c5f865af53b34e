#pragma once

#include <cstdint>

namespace trivar {

// Counter-mode SplitMix64. Output i depends only on (seed, i), so streams are
// reproducible bit for bit across platforms and independent of call order
// within a derived stream. Integer outputs only; no floating point anywhere.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : seed_(seed) {}

  static uint64_t value(uint64_t seed, uint64_t counter) {
    uint64_t z = seed + 0x9E3779B97F4A7C15ull * (counter + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t at(uint64_t counter) const { return value(seed_, counter); }
  uint64_t next() { return at(counter_++); }

  // Inclusive range. Modulo bias is negligible for the small ranges used here
  // and keeps the mapping platform independent.
  int64_t uniform(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next() % span);
  }

  bool coin() { return (next() & 1) != 0; }

  // Independent child stream. Consumes nothing from this stream.
  SplitMix64 derive(uint64_t stream) const {
    return SplitMix64(value(seed_ ^ 0xA3EC647659359ACDull, stream));
  }

  uint64_t seed() const { return seed_; }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace trivar
