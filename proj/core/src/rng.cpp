#include "pdsynth/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

namespace pdsynth {

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return static_cast<std::size_t>(r % n);
}

double Rng::laplace(double scale) {
  // One uniform per call even at scale 0, so draw accounting is uniform
  // across the no-noise limit.
  const double u = next_open01();
  if (scale == 0.0) return 0.0;
  // Inverse CDF split at the median.
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

double Rng::normal() {
  const double u1 = next_open01();
  const double u2 = next_open01();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double Rng::gamma(double shape) {
  if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    const double u = next_open01();
    return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_open01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

std::size_t Rng::categorical(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("categorical: empty vector");
  const double u = next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return i;
  }
  // Rounding leftovers land on the last entry with positive mass.
  for (std::size_t i = probs.size(); i-- > 0;) {
    if (probs[i] > 0.0) return i;
  }
  return probs.size() - 1;
}

void Rng::shuffle_step(std::vector<std::size_t>& indices, std::size_t j) {
  const std::size_t n = indices.size();
  const std::size_t pick = j + uniform_index(n - j);
  std::swap(indices[j], indices[pick]);
}

std::uint64_t derive_seed(std::uint64_t root, std::string_view tag,
                          std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = fnv1a_int(root);
  for (char c : tag) {
    h ^= static_cast<std::uint8_t>(c);
    h *= kFnvPrime;
  }
  h = fnv1a_int(a, h);
  h = fnv1a_int(b, h);
  return h;
}

}  // namespace pdsynth
