#include "rabbi/rng.hpp"

namespace rabbi {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t k, std::uint64_t rep,
                          std::string_view tag) noexcept {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ k);
  h = splitmix64(h ^ rep);
  return splitmix64(h ^ fnv1a64(tag));
}

std::size_t Stream::categorical(std::span<const double> probs) {
  const double u = uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;
}

Stream derive_stream(std::uint64_t master_seed, std::uint64_t k, std::uint64_t rep,
                     std::string_view tag) {
  return Stream(stream_seed(master_seed, k, rep, tag));
}

}  // namespace rabbi
