#include "pdsynth/oracle.hpp"

#include <cmath>

#include "pdsynth/entropy.hpp"
#include "pdsynth/errors.hpp"

namespace pdsynth {

double laplace_tail(double x, double eps0) {
  return static_cast<double>(laplace_tail_l(x, eps0));
}

long double laplace_tail_l(long double x, long double eps0) {
  if (!(eps0 > 0.0L)) {
    throw std::invalid_argument("laplace_tail: eps0 must be positive");
  }
  if (x >= 0.0L) return 0.5L * std::exp(-eps0 * x);
  return 1.0L - 0.5L * std::exp(eps0 * x);
}

double pass_prob_exact(std::uint64_t count, std::uint64_t k, double eps0) {
  const long double x =
      static_cast<long double>(k) - static_cast<long double>(count);
  return static_cast<double>(laplace_tail_l(x, eps0));
}

long double PartitionProfile::partition_mass(std::uint64_t i) const {
  const auto it = members.find(i);
  if (it == members.end()) return 0.0L;
  long double mass = 0.0L;
  for (auto r : it->second) mass += probabilities[r];
  return mass;
}

PartitionProfile profile_partitions(const Dataset& data,
                                    std::span<const Value> candidate,
                                    const GenerativeModel& model,
                                    std::size_t omega, double gamma) {
  PartitionProfile profile;
  profile.probabilities.resize(data.size(), 0.0L);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const double p = record_probability(model, data.row(r), candidate, omega);
    if (p <= 0.0) continue;
    profile.probabilities[r] = p;
    profile.members[partition_number(p, gamma)].push_back(r);
  }
  return profile;
}

long double release_prob_exact(const Dataset& data,
                               std::span<const Value> candidate,
                               const GenerativeModel& model, std::size_t omega,
                               const PrivacyParams& params) {
  const auto profile =
      profile_partitions(data, candidate, model, omega, params.gamma);
  long double total = 0.0L;
  for (const auto& [i, records] : profile.members) {
    const long double pass = laplace_tail_l(
        static_cast<long double>(params.k) -
            static_cast<long double>(records.size()),
        params.eps0);
    total += pass * profile.partition_mass(i);
  }
  return total / static_cast<long double>(data.size());
}

std::vector<Record> enumerate_universe(const Schema& schema,
                                       std::size_t limit) {
  std::size_t total = 1;
  for (const auto& attr : schema.attributes()) {
    if (total > limit / attr.cardinality()) {
      throw InputError("universe enumeration: schema too large");
    }
    total *= attr.cardinality();
  }
  std::vector<Record> universe;
  universe.reserve(total);
  Record cur{std::vector<Value>(schema.attribute_count(), 0)};
  for (;;) {
    universe.push_back(cur);
    std::size_t pos = schema.attribute_count();
    while (pos > 0) {
      --pos;
      if (++cur.values[pos] < schema.attribute(pos).cardinality()) break;
      cur.values[pos] = 0;
      if (pos == 0) return universe;
    }
  }
}

BoundReport check_release_bound(const Dataset& data, const Record& extra,
                                std::span<const Record> universe,
                                const GenerativeModel& model,
                                std::size_t omega, const PrivacyParams& params,
                                std::uint64_t t,
                                std::optional<DpBudget> bound_override) {
  if (t < 1 || t >= params.k) {
    throw std::invalid_argument("check_release_bound: need 1 <= t < k");
  }
  if (data.size() < params.k) {
    throw std::invalid_argument("check_release_bound: |D| must be >= k");
  }
  Dataset grown(data.schema());
  for (std::size_t r = 0; r < data.size(); ++r) grown.append(data.row(r));
  grown.append(extra);

  BoundReport report;
  if (bound_override) {
    report.eps = bound_override->eps;
    report.delta = bound_override->delta;
  } else {
    const DpBudget bound = release_budget(params.k, params.gamma, params.eps0, t);
    report.eps = bound.eps;
    report.delta = bound.delta;
  }
  const long double efac = std::exp(static_cast<long double>(report.eps));
  const long double e0fac = std::exp(static_cast<long double>(params.eps0));
  const long double delta = report.delta;

  // Outcome sets from the bound's derivation: outcomes are split by whether
  // the extra record lands in a partition that is still small (< t) in D.
  long double small_base = 0.0L, small_grown = 0.0L;
  long double large_base = 0.0L, large_grown = 0.0L;

  auto track = [](double& worst, long double margin) {
    if (static_cast<double>(margin) > worst) {
      worst = static_cast<double>(margin);
    }
  };

  for (const auto& y : universe) {
    const auto base_prof =
        profile_partitions(data, y.values, model, omega, params.gamma);
    const auto grown_prof =
        profile_partitions(grown, y.values, model, omega, params.gamma);

    auto release_prob = [&](const PartitionProfile& prof, std::size_t n) {
      long double total = 0.0L;
      for (const auto& [i, records] : prof.members) {
        total += laplace_tail_l(static_cast<long double>(params.k) -
                                    static_cast<long double>(records.size()),
                                params.eps0) *
                 prof.partition_mass(i);
      }
      return total / static_cast<long double>(n);
    };
    const long double p_base = release_prob(base_prof, data.size());
    const long double p_grown = release_prob(grown_prof, grown.size());

    track(report.worst_add_direction, p_grown - (efac * p_base + delta));
    track(report.worst_remove_direction, p_base - (efac * p_grown + delta));
    ++report.outcomes_checked;

    // Pass-probability sandwich and per-partition mass monotonicity across
    // every bracket either profile touches.
    for (const auto* prof : {&base_prof, &grown_prof}) {
      for (const auto& [i, records] : prof->members) {
        const long double pt_base = laplace_tail_l(
            static_cast<long double>(params.k) -
                static_cast<long double>(base_prof.partition_size(i)),
            params.eps0);
        const long double pt_grown = laplace_tail_l(
            static_cast<long double>(params.k) -
                static_cast<long double>(grown_prof.partition_size(i)),
            params.eps0);
        track(report.worst_pass_sandwich, pt_base - pt_grown);
        track(report.worst_pass_sandwich, pt_grown - e0fac * pt_base);
        const long double q_base = pt_base * base_prof.partition_mass(i);
        const long double q_grown = pt_grown * grown_prof.partition_mass(i);
        track(report.worst_partition_monotonicity, q_base - q_grown);
      }
    }

    const double p_extra =
        record_probability(model, extra.values, y.values, omega);
    bool in_small = false;
    if (p_extra > 0.0) {
      const auto bracket = partition_number(p_extra, params.gamma);
      in_small = base_prof.partition_size(bracket) < t;
    }
    if (in_small) {
      small_base += p_base;
      small_grown += p_grown;
    } else {
      large_base += p_base;
      large_grown += p_grown;
    }
  }

  const long double total_base = small_base + large_base;
  const long double total_grown = small_grown + large_grown;
  for (const auto& [b, g] : std::initializer_list<
           std::pair<long double, long double>>{{small_base, small_grown},
                                                {large_base, large_grown},
                                                {total_base, total_grown}}) {
    track(report.worst_add_direction, g - (efac * b + delta));
    track(report.worst_remove_direction, b - (efac * g + delta));
    report.sets_checked += 2;
  }
  return report;
}

SensitivityReport sensitivity_bruteforce(std::size_t bins, std::uint64_t n) {
  if (bins < 1 || bins > 6 || n < 2 || n > 20) {
    throw std::invalid_argument(
        "sensitivity_bruteforce: enumerable range is 1..6 bins, 2..20 records");
  }
  SensitivityReport report;
  report.bound = entropy_sensitivity(n);

  std::vector<std::uint64_t> hist(bins, 0);
  auto visit = [&](auto&& self, std::size_t pos,
                   std::uint64_t remaining) -> void {
    if (pos + 1 == bins) {
      hist[pos] = remaining;
      ++report.histograms;
      const double h = entropy_bits(hist);
      for (std::size_t j1 = 0; j1 < bins; ++j1) {
        for (std::size_t j2 = 0; j2 < bins; ++j2) {
          if (j1 == j2 || hist[j2] == 0) continue;
          ++hist[j1];
          --hist[j2];
          const double moved = entropy_bits(hist);
          --hist[j1];
          ++hist[j2];
          ++report.moves;
          report.max_observed =
              std::max(report.max_observed, std::fabs(h - moved));
        }
      }
      return;
    }
    for (std::uint64_t c = 0; c <= remaining; ++c) {
      hist[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  visit(visit, 0, n);
  return report;
}

}  // namespace pdsynth
