#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "pdsynth/accounting.hpp"
#include "pdsynth/privacy.hpp"

namespace pdsynth {

// Pr[L >= x] for L ~ Laplace(1/eps0).
double laplace_tail(double x, double eps0);
long double laplace_tail_l(long double x, long double eps0);

// Probability that the randomized test passes when the seed's partition
// holds `count` plausible records: Pr[L >= k - count].
double pass_prob_exact(std::uint64_t count, std::uint64_t k, double eps0);

// For a fixed candidate: which records of D can generate it, with what
// probability, and in which geometric bracket.
struct PartitionProfile {
  std::map<std::uint64_t, std::vector<std::size_t>> members;
  std::vector<long double> probabilities;  // per record; 0 if unreachable

  std::uint64_t partition_size(std::uint64_t i) const {
    const auto it = members.find(i);
    return it == members.end() ? 0 : it->second.size();
  }
  long double partition_mass(std::uint64_t i) const;
};

PartitionProfile profile_partitions(const Dataset& data,
                                    std::span<const Value> candidate,
                                    const GenerativeModel& model,
                                    std::size_t omega, double gamma);

// Exact probability that one uncapped randomized-test mechanism invocation
// releases exactly `candidate`: the average over seeds of (generation
// probability) * (test pass probability), grouped by partition.
long double release_prob_exact(const Dataset& data,
                               std::span<const Value> candidate,
                               const GenerativeModel& model, std::size_t omega,
                               const PrivacyParams& params);

// All records of a (small) schema universe, in lexicographic value order.
std::vector<Record> enumerate_universe(const Schema& schema,
                                       std::size_t limit = 1u << 12);

// Exhaustive neighbor-pair check of the release-probability bound for one
// (D, d') pair over every singleton outcome, the low/high outcome split used
// in the bound's derivation, and the full universe. Margins are max(LHS -
// RHS) over all checks, so anything <= 0 (up to numerical zero) passes.
struct BoundReport {
  double eps = 0.0;
  double delta = 0.0;
  double worst_add_direction = -1.0;     // Pr[F(D+d') in Y] vs bound from D
  double worst_remove_direction = -1.0;  // Pr[F(D) in Y] vs bound from D+d'
  double worst_pass_sandwich = -1.0;     // pass-prob monotonicity/ratio check
  double worst_partition_monotonicity = -1.0;  // per-partition mass*pass check
  std::uint64_t outcomes_checked = 0;
  std::uint64_t sets_checked = 0;

  bool ok(double tol = 1e-12) const {
    return worst_add_direction <= tol && worst_remove_direction <= tol &&
           worst_pass_sandwich <= tol && worst_partition_monotonicity <= tol;
  }
};

// `bound_override`, when given, replaces the (eps, delta) the sweep checks
// against; negative controls use it to confirm the sweep can see violations.
BoundReport check_release_bound(const Dataset& data, const Record& extra,
                                std::span<const Record> universe,
                                const GenerativeModel& model,
                                std::size_t omega, const PrivacyParams& params,
                                std::uint64_t t,
                                std::optional<DpBudget> bound_override = {});

// Exhaustive sweep over all `bins`-ary histograms of n records and all
// one-record moves between bins; confirms the closed-form sensitivity bound.
struct SensitivityReport {
  double max_observed = 0.0;
  double bound = 0.0;
  std::uint64_t histograms = 0;
  std::uint64_t moves = 0;

  bool ok() const { return max_observed <= bound; }
};

SensitivityReport sensitivity_bruteforce(std::size_t bins, std::uint64_t n);

}  // namespace pdsynth
