#pragma once

#include <cstdint>
#include <optional>

#include "pdsynth/synthesis.hpp"

namespace pdsynth {

inline constexpr std::uint64_t kUnlimited = UINT64_MAX;

struct PrivacyParams {
  std::uint64_t k = 50;
  double gamma = 4.0;
  double eps0 = 1.0;
  // Early-termination controls for the plausible-seed scan. They trade
  // release rate for speed but never affect privacy: a capped scan can only
  // turn a pass into a fail.
  std::uint64_t max_plausible = kUnlimited;
  std::uint64_t max_check_plausible = kUnlimited;

  void validate() const;
};

struct ReleaseDecision {
  Record candidate;
  std::size_t seed_index = 0;
  std::size_t omega_used = 0;
  std::uint64_t partition = 0;        // geometric bracket of the seed's probability
  std::uint64_t plausible_count = 0;  // k', possibly capped
  bool capped = false;                // a scan cap fired before the scan finished
  double threshold_used = 0.0;        // k, or the randomized k~
  bool passed = false;
};

// The unique i >= 0 with gamma^-(i+1) < p <= gamma^-i. Computed in the log
// domain with a small relative nudge toward the upper boundary so exact
// powers land in their closed-upper bracket despite floating-point drift.
std::uint64_t partition_number(double p, double gamma);

struct PlausibleCount {
  std::uint64_t count = 0;
  std::uint64_t examined = 0;
  bool capped = false;
};

// Counts records of `data` whose probability of generating `candidate` falls
// in partition `bracket`. Scans in an rng-shuffled order and stops early at
// the configured caps.
PlausibleCount count_plausible_seeds(const Dataset& data,
                                     std::span<const Value> candidate,
                                     std::uint64_t bracket, std::size_t omega,
                                     const GenerativeModel& model,
                                     const PrivacyParams& params, Rng& rng);

// Pass iff at least k records (the seed included) are plausible seeds of the
// candidate, all within one geometric probability bracket.
ReleaseDecision test_deterministic(const Dataset& data,
                                   std::span<const Value> seed,
                                   std::span<const Value> candidate,
                                   std::size_t omega,
                                   const GenerativeModel& model,
                                   const PrivacyParams& params, Rng& rng);

// Same test with the threshold randomized: k~ = k + Lap(1/eps0), drawn fresh
// per invocation and compared against k' on the reals.
ReleaseDecision test_randomized(const Dataset& data,
                                std::span<const Value> seed,
                                std::span<const Value> candidate,
                                std::size_t omega,
                                const GenerativeModel& model,
                                const PrivacyParams& params, Rng& rng);

enum class TestKind { Deterministic, Randomized };

struct MechanismResult {
  std::optional<Record> released;
  ReleaseDecision decision;
};

// One full mechanism invocation: sample a seed uniformly, synthesize a
// candidate, run the chosen privacy test, release only on pass. The decision
// is always returned for the (private) audit log.
MechanismResult mechanism_step(const Dataset& seeds,
                               const GenerativeModel& model,
                               const SynthesisParams& synth,
                               const PrivacyParams& params, TestKind kind,
                               Rng& rng);

}  // namespace pdsynth
