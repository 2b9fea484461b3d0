#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pdsynth/rng.hpp"
#include "pdsynth/schema.hpp"

namespace pdsynth {

// Shannon entropy in bits of the empirical distribution behind a histogram.
// Zero counts contribute nothing; the histogram must have positive total.
double entropy_bits(std::span<const std::uint64_t> hist);

// Worst-case change of entropy_bits when one record moves between bins of an
// n-record histogram: (1/n)(2 + 1/ln 2 + 2 log2 n). Requires n >= 2.
double entropy_sensitivity(std::uint64_t n);

// Laplace-perturbed entropy; fresh noise per call, no clamping.
double noisy_entropy(double h, double delta_h, double eps_h, Rng& rng);

// Laplace-perturbed record count, rounded to the nearest integer and floored
// at 2 so the sensitivity bound stays defined downstream.
std::uint64_t noisy_record_count(std::uint64_t n, double eps_n, Rng& rng);

// Symmetrical uncertainty 2 - 2*H(a,b)/(H(a)+H(b)), clamped to [0,1]. The
// inputs may be noisy (even negative); only the result is clamped. A zero
// denominator yields 0.
double correlation(double h_a, double h_b, double h_ab);

// Quality of a parent set for one target: sum of parent-target correlations
// over sqrt(|P| + sum of ordered inter-parent correlations). Empty set
// scores 0. corr(a, b) is supplied by the caller.
class CorrelationLookup {
 public:
  virtual ~CorrelationLookup() = default;
  virtual double corr(std::size_t a, std::size_t b) const = 0;
};

double merit(std::span<const std::size_t> parents, std::size_t target,
             const CorrelationLookup& corr);

// Product of the parents' bucket counts; 1 for the empty set. Saturates
// instead of overflowing.
std::uint64_t parent_cost(std::span<const std::size_t> parents,
                          const Schema& schema);

inline constexpr std::uint64_t kCostSaturated = UINT64_MAX;

}  // namespace pdsynth
