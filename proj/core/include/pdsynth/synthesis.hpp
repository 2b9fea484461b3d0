#pragma once

#include <span>

#include "pdsynth/model.hpp"

namespace pdsynth {

// How many trailing attributes (in the model's resampling order) a candidate
// regenerates. A range means each candidate draws omega uniformly from it.
struct SynthesisParams {
  std::size_t omega_lo = 1;
  std::size_t omega_hi = 1;

  static SynthesisParams fixed(std::size_t omega) { return {omega, omega}; }
  bool is_fixed() const { return omega_lo == omega_hi; }
  std::size_t draw(Rng& rng) const {
    if (is_fixed()) return omega_lo;
    return omega_lo + rng.uniform_index(omega_hi - omega_lo + 1);
  }
  void validate(std::size_t attribute_count) const;
};

// Copies the seed, then redraws the last `omega` attributes of the
// resampling order from their conditional tables. Parents of a redrawn
// attribute are read from the working record, so they are seed values while
// retained and fresh values once resampled.
Record synthesize(std::span<const Value> seed, std::size_t omega,
                  const GenerativeModel& model, Rng& rng);

// Baseline: every attribute independently from its marginal.
Record synthesize_marginal(const GenerativeModel& model, Rng& rng);

// Exact probability that the generator, seeded with d and using this omega,
// outputs y. Zero unless y agrees with d on every retained attribute;
// otherwise the product of the resampled attributes' conditional
// probabilities, with all parent values read from y.
double record_probability(const GenerativeModel& model,
                          std::span<const Value> seed,
                          std::span<const Value> candidate, std::size_t omega);

}  // namespace pdsynth
