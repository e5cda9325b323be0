#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace rabbi {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// 64-bit FNV-1a over the bytes of `text`.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// Seed for the stream identified by (master_seed, k, rep, tag):
///   h = splitmix64(master_seed)
///   h = splitmix64(h ^ k)
///   h = splitmix64(h ^ rep)
///   h = splitmix64(h ^ fnv1a64(tag))
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t k, std::uint64_t rep,
                          std::string_view tag) noexcept;

/// mt19937_64 with hand-rolled conversions, so draws are identical across
/// standard libraries.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Index drawn by inverse CDF; the last index with positive mass absorbs
  /// round-off.
  std::size_t categorical(std::span<const double> probs);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

Stream derive_stream(std::uint64_t master_seed, std::uint64_t k, std::uint64_t rep,
                     std::string_view tag);

}  // namespace rabbi
