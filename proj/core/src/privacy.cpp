#include "pdsynth/privacy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pdsynth/errors.hpp"

namespace pdsynth {

void PrivacyParams::validate() const {
  if (k < 1) throw InputError("privacy: k must be >= 1");
  if (!(gamma > 1.0)) throw InputError("privacy: gamma must be > 1");
  if (!(eps0 > 0.0)) throw InputError("privacy: eps0 must be positive");
}

std::uint64_t partition_number(double p, double gamma) {
  if (!(gamma > 1.0)) {
    throw std::invalid_argument("partition_number: gamma must be > 1");
  }
  if (!(p > 0.0) || p > 1.0 + 1e-9) {
    throw std::invalid_argument("partition_number: probability outside (0,1]");
  }
  if (p > 1.0) p = 1.0;
  const double x = -std::log(p) / std::log(gamma);
  const double nudged = x + 1e-12 * std::max(1.0, std::fabs(x));
  const double f = std::floor(nudged);
  return f <= 0.0 ? 0 : static_cast<std::uint64_t>(f);
}

PlausibleCount count_plausible_seeds(const Dataset& data,
                                     std::span<const Value> candidate,
                                     std::uint64_t bracket, std::size_t omega,
                                     const GenerativeModel& model,
                                     const PrivacyParams& params, Rng& rng) {
  const std::size_t n = data.size();
  const std::uint64_t check_limit =
      std::min<std::uint64_t>(n, params.max_check_plausible);

  // The shuffle is materialized lazily: position j is finalized right before
  // being read, so an early stop never pays for the full permutation.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  PlausibleCount result;
  for (std::uint64_t j = 0; j < check_limit; ++j) {
    if (j + 1 < n) rng.shuffle_step(order, j);
    ++result.examined;
    const double p =
        record_probability(model, data.row(order[j]), candidate, omega);
    if (p > 0.0 && partition_number(p, params.gamma) == bracket) {
      ++result.count;
      if (result.count >= params.max_plausible) {
        result.capped = result.examined < n;
        return result;
      }
    }
  }
  result.capped = result.examined < n;
  return result;
}

namespace {

ReleaseDecision run_test(const Dataset& data, std::span<const Value> seed,
                         std::span<const Value> candidate, std::size_t omega,
                         const GenerativeModel& model,
                         const PrivacyParams& params, double threshold,
                         Rng& rng) {
  const double p_seed = record_probability(model, seed, candidate, omega);
  if (!(p_seed > 0.0)) {
    throw std::logic_error(
        "privacy test: candidate has zero probability under its own seed");
  }
  ReleaseDecision decision;
  decision.candidate = Record{{candidate.begin(), candidate.end()}};
  decision.omega_used = omega;
  decision.partition = partition_number(p_seed, params.gamma);
  const auto scan = count_plausible_seeds(data, candidate, decision.partition,
                                          omega, model, params, rng);
  decision.plausible_count = scan.count;
  decision.capped = scan.capped;
  decision.threshold_used = threshold;
  decision.passed = static_cast<double>(scan.count) >= threshold;
  return decision;
}

}  // namespace

ReleaseDecision test_deterministic(const Dataset& data,
                                   std::span<const Value> seed,
                                   std::span<const Value> candidate,
                                   std::size_t omega,
                                   const GenerativeModel& model,
                                   const PrivacyParams& params, Rng& rng) {
  params.validate();
  return run_test(data, seed, candidate, omega, model, params,
                  static_cast<double>(params.k), rng);
}

ReleaseDecision test_randomized(const Dataset& data,
                                std::span<const Value> seed,
                                std::span<const Value> candidate,
                                std::size_t omega,
                                const GenerativeModel& model,
                                const PrivacyParams& params, Rng& rng) {
  params.validate();
  // Fresh noise per invocation; the comparison stays on the reals.
  const double k_tilde =
      static_cast<double>(params.k) + rng.laplace(1.0 / params.eps0);
  return run_test(data, seed, candidate, omega, model, params, k_tilde, rng);
}

MechanismResult mechanism_step(const Dataset& seeds,
                               const GenerativeModel& model,
                               const SynthesisParams& synth,
                               const PrivacyParams& params, TestKind kind,
                               Rng& rng) {
  params.validate();
  synth.validate(model.attribute_count());
  if (seeds.size() < params.k) {
    throw InputError("mechanism: seed dataset smaller than k");
  }
  const std::size_t seed_index = rng.uniform_index(seeds.size());
  const std::size_t omega = synth.draw(rng);
  const auto seed_row = seeds.row(seed_index);
  const Record candidate = synthesize(seed_row, omega, model, rng);

  ReleaseDecision decision =
      kind == TestKind::Deterministic
          ? test_deterministic(seeds, seed_row, candidate.values, omega, model,
                               params, rng)
          : test_randomized(seeds, seed_row, candidate.values, omega, model,
                            params, rng);
  decision.seed_index = seed_index;

  MechanismResult result;
  if (decision.passed) result.released = candidate;
  result.decision = std::move(decision);
  return result;
}

}  // namespace pdsynth
