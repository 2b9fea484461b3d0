#include "pdsynth/accounting.hpp"

#include <cmath>
#include <stdexcept>

#include "pdsynth/errors.hpp"

namespace pdsynth {

DpBudget release_budget(std::uint64_t k, double gamma, double eps0,
                        std::uint64_t t) {
  if (t < 1 || t >= k) {
    throw std::invalid_argument("release_budget: need 1 <= t < k");
  }
  if (!(gamma > 1.0) || !(eps0 > 0.0)) {
    throw std::invalid_argument("release_budget: need gamma > 1 and eps0 > 0");
  }
  const double td = static_cast<double>(t);
  return {eps0 + std::log1p(gamma / td),
          std::exp(-eps0 * static_cast<double>(k - t))};
}

DpBudget seq_compose(std::span<const DpBudget> budgets) {
  if (budgets.empty()) {
    throw std::invalid_argument("seq_compose: empty budget list");
  }
  DpBudget total;
  for (const auto& b : budgets) {
    total.eps += b.eps;
    total.delta += b.delta;
  }
  return total;
}

DpBudget adv_compose(double eps, double delta, std::uint64_t count,
                     double delta_slack) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("adv_compose: eps must be positive");
  }
  if (count < 1) {
    throw std::invalid_argument("adv_compose: count must be >= 1");
  }
  if (!(delta_slack > 0.0) || !(delta_slack < 1.0)) {
    throw std::invalid_argument("adv_compose: slack must lie in (0,1)");
  }
  const double kd = static_cast<double>(count);
  return {eps * std::sqrt(2.0 * kd * std::log(1.0 / delta_slack)) +
              kd * eps * std::expm1(eps),
          kd * delta + delta_slack};
}

DpBudget amplify(double eps, double delta, double p) {
  if (!(p > delta) || !(p < 1.0)) {
    throw std::invalid_argument("amplify: need delta < p < 1");
  }
  return {std::log1p(p * std::expm1(eps)), p * delta};
}

DpBudget structure_budget(std::size_t m, double eps_entropy,
                          double eps_record_count, double delta_slack) {
  if (!(eps_record_count > 0.0)) {
    throw std::invalid_argument("structure_budget: eps_record_count > 0 required");
  }
  const auto entropy_part =
      adv_compose(eps_entropy, 0.0, static_cast<std::uint64_t>(m * (m + 1)),
                  delta_slack);
  return {eps_record_count + entropy_part.eps, entropy_part.delta};
}

DpBudget parameter_budget(std::size_t m, double eps_parameter,
                          double delta_slack) {
  return adv_compose(eps_parameter, 0.0, static_cast<std::uint64_t>(m),
                     delta_slack);
}

DpBudget model_budget(const DpBudget& structure, const DpBudget& parameter,
                      std::optional<double> sampling_p) {
  DpBudget total{std::max(structure.eps, parameter.eps),
                 std::max(structure.delta, parameter.delta)};
  if (sampling_p) {
    total = amplify(total.eps, total.delta, *sampling_p);
  }
  return total;
}

namespace {

// Smallest x with f(x) >= target, for f monotone nondecreasing; f may
// overflow to +inf for large x, which the bracketing tolerates.
template <typename F>
double bisect_to_target(F f, double target) {
  double hi = 1e-9;
  int expand = 0;
  while (f(hi) < target) {
    hi *= 2.0;
    if (++expand > 300) {
      throw BudgetError("solve_per_query did not converge (target unreachable)");
    }
  }
  double lo = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace

PerQueryEps solve_per_query(const DpBudget& target, std::size_t m,
                            std::optional<double> sampling_p,
                            double delta_structure, double delta_parameter) {
  if (!(target.eps > 0.0)) {
    throw BudgetError("solve_per_query: target eps must be positive");
  }
  const double model_delta = std::max(delta_structure, delta_parameter) *
                             (sampling_p ? *sampling_p : 1.0);
  if (model_delta > target.delta) {
    throw BudgetError("solve_per_query: delta target below the composition slack");
  }
  // Undo the sampling amplification so both phases can be solved against the
  // pre-amplification epsilon.
  double inner = target.eps;
  if (sampling_p) {
    if (!(*sampling_p > 0.0) || !(*sampling_p < 1.0)) {
      throw BudgetError("solve_per_query: sampling probability outside (0,1)");
    }
    inner = std::log1p(std::expm1(target.eps) / *sampling_p);
  }

  PerQueryEps out;
  out.eps_entropy = bisect_to_target(
      [&](double x) {
        return structure_budget(m, x, x, delta_structure).eps;
      },
      inner);
  out.eps_record_count = out.eps_entropy;
  out.eps_parameter = bisect_to_target(
      [&](double x) { return parameter_budget(m, x, delta_parameter).eps; },
      inner);
  return out;
}

}  // namespace pdsynth
