#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pdsynth {

// 64-bit FNV-1a. All deterministic stream/table seeding in the tool goes
// through this hash so that results are bit-stable across platforms and
// process counts.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a(std::span<const std::uint8_t> bytes,
                           std::uint64_t h = kFnvOffset) {
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

// Feeds an integer into the hash as little-endian bytes.
template <typename T>
std::uint64_t fnv1a_int(T value, std::uint64_t h = kFnvOffset) {
  auto u = static_cast<std::uint64_t>(value);
  for (int i = 0; i < static_cast<int>(sizeof(T)); ++i) {
    h ^= static_cast<std::uint8_t>(u >> (8 * i));
    h *= kFnvPrime;
  }
  return h;
}

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact per
// the standard); every variate transform is implemented here rather than via
// std::*_distribution, whose outputs are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0,1): (k + 0.5) * 2^-53 never returns an endpoint, so log()
  // of it (or of its reflection) is always finite.
  double next_open01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [0,1).
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Unbiased uniform index in [0, n).
  std::size_t uniform_index(std::size_t n);

  // Laplace(0, scale). scale == 0 yields exactly 0 (the no-noise limit).
  double laplace(double scale);

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

  // Gamma(shape, 1) via Marsaglia-Tsang, with the boost trick for shape < 1.
  double gamma(double shape);

  // Draws an index from a probability vector (entries >= 0, summing to ~1).
  std::size_t categorical(std::span<const double> probs);

  // Lazily shuffled prefix: after calling with position j, indices[0..j] are
  // the first j+1 entries of a uniform permutation (Fisher-Yates step).
  void shuffle_step(std::vector<std::size_t>& indices, std::size_t j);

 private:
  std::mt19937_64 engine_;
};

// Mixes components into a child stream seed. Order matters; callers pass a
// short tag to keep independent uses of the same components distinct.
std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a = 0, std::uint64_t b = 0);

}  // namespace pdsynth
