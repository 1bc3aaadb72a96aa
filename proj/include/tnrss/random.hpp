#pragma once

#include <concepts>
#include <cstdint>
#include <random>
#include <span>

namespace tnrss {

/// Anything that can fill a byte buffer with randomness.
template <class R>
concept EntropySource = requires(R& r, std::span<std::uint8_t> out) {
  { r.fill(out) };
};

/// OS entropy (getrandom / /dev/urandom behind std::random_device on Linux).
class SystemRandom {
 public:
  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      auto word = dev_();
      for (int k = 0; k < 4 && i < out.size(); ++k, ++i) {
        out[i] = static_cast<std::uint8_t>(word >> (8 * k));
      }
    }
  }

 private:
  std::random_device dev_;
};

/// Reproducible stream for tests and the seeded harness runs. Not for keys
/// that protect anything.
class SeededRandom {
 public:
  explicit SeededRandom(std::uint64_t seed) : engine_(seed) {}

  void fill(std::span<std::uint8_t> out) {
    std::size_t i = 0;
    while (i < out.size()) {
      auto word = engine_();
      for (int k = 0; k < 8 && i < out.size(); ++k, ++i) {
        out[i] = static_cast<std::uint8_t>(word >> (8 * k));
      }
    }
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [lo, hi].
  std::uint64_t uniform(std::uint64_t lo, std::uint64_t hi) {
    return std::uniform_int_distribution<std::uint64_t>(lo, hi)(engine_);
  }

  bool coin() { return (engine_() & 1U) != 0; }

 private:
  std::mt19937_64 engine_;
};

static_assert(EntropySource<SystemRandom>);
static_assert(EntropySource<SeededRandom>);

}  // namespace tnrss
