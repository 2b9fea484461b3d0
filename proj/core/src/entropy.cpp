#include "pdsynth/entropy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdsynth {

double entropy_bits(std::span<const std::uint64_t> hist) {
  std::uint64_t total = 0;
  for (auto c : hist) total += c;
  if (total == 0) {
    throw std::invalid_argument("entropy_bits: histogram sums to zero");
  }
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (auto c : hist) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h < 0.0 ? 0.0 : h;
}

double entropy_sensitivity(std::uint64_t n) {
  if (n < 2) {
    throw std::invalid_argument("entropy_sensitivity: need n >= 2");
  }
  const double nd = static_cast<double>(n);
  return (2.0 + 1.0 / std::numbers::ln2 + 2.0 * std::log2(nd)) / nd;
}

double noisy_entropy(double h, double delta_h, double eps_h, Rng& rng) {
  if (delta_h <= 0.0) {
    throw std::invalid_argument("noisy_entropy: sensitivity must be positive");
  }
  if (!(eps_h > 0.0)) {
    throw std::invalid_argument("noisy_entropy: epsilon must be positive");
  }
  const double scale = std::isinf(eps_h) ? 0.0 : delta_h / eps_h;
  return h + rng.laplace(scale);
}

std::uint64_t noisy_record_count(std::uint64_t n, double eps_n, Rng& rng) {
  if (!(eps_n > 0.0)) {
    throw std::invalid_argument("noisy_record_count: epsilon must be positive");
  }
  const double scale = std::isinf(eps_n) ? 0.0 : 1.0 / eps_n;
  const double noisy = static_cast<double>(n) + rng.laplace(scale);
  const double rounded = std::round(noisy);
  if (rounded < 2.0) return 2;
  return static_cast<std::uint64_t>(rounded);
}

double correlation(double h_a, double h_b, double h_ab) {
  const double denom = h_a + h_b;
  if (denom == 0.0) return 0.0;
  const double c = 2.0 - 2.0 * h_ab / denom;
  if (c < 0.0) return 0.0;
  if (c > 1.0) return 1.0;
  return c;
}

double merit(std::span<const std::size_t> parents, std::size_t target,
             const CorrelationLookup& corr) {
  if (parents.empty()) return 0.0;
  double num = 0.0;
  for (auto p : parents) num += corr.corr(target, p);
  double inter = 0.0;
  for (auto a : parents) {
    for (auto b : parents) {
      if (a != b) inter += corr.corr(a, b);
    }
  }
  const double radicand = static_cast<double>(parents.size()) + inter;
  return num / std::sqrt(radicand);
}

std::uint64_t parent_cost(std::span<const std::size_t> parents,
                          const Schema& schema) {
  std::uint64_t cost = 1;
  for (auto p : parents) {
    const std::uint64_t b = schema.bucket_count(p);
    if (cost > kCostSaturated / b) return kCostSaturated;
    cost *= b;
  }
  return cost;
}

}  // namespace pdsynth
