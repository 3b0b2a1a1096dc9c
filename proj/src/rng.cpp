#include "sbmh/rng.hpp"

namespace sbmh {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate,
                          std::uint64_t attempt) {
  return splitmix64(splitmix64(base + replicate) + attempt);
}

std::uint64_t Rng::below(std::uint64_t n) {
  // 2^64 mod n; values below it would over-represent small residues.
  const std::uint64_t threshold = (0 - n) % n;
  std::uint64_t x = engine_();
  while (x < threshold) x = engine_();
  return x % n;
}

}  // namespace sbmh
