#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace pdsynth {

struct DpBudget {
  double eps = 0.0;
  double delta = 0.0;
};

// (eps, delta) satisfied by one released record of the randomized-test
// mechanism: eps = eps0 + ln(1 + gamma/t), delta = exp(-eps0 (k - t)).
// t in [1, k) trades delta (smaller with small t) against eps.
DpBudget release_budget(std::uint64_t k, double gamma, double eps0,
                        std::uint64_t t);

// Componentwise sums across sequentially composed mechanisms.
DpBudget seq_compose(std::span<const DpBudget> budgets);

// K-fold advanced composition at slack delta'':
// eps' = eps*sqrt(2k ln(1/delta'')) + k*eps*(e^eps - 1), delta' = k*delta + delta''.
DpBudget adv_compose(double eps, double delta, std::uint64_t count,
                     double delta_slack);

// Subsampling each input record with probability p before running the
// mechanism: eps' = ln(1 + p(e^eps - 1)), delta' = p*delta.
DpBudget amplify(double eps, double delta, double p);

// Budget of structure learning: one record-count query composed sequentially
// with m(m+1) entropy queries under advanced composition.
DpBudget structure_budget(std::size_t m, double eps_entropy,
                          double eps_record_count, double delta_slack);

// Budget of parameter learning: advanced composition over the m attributes'
// count vectors (each of L1 sensitivity 1).
DpBudget parameter_budget(std::size_t m, double eps_parameter,
                          double delta_slack);

// Whole-model budget: the two learning phases read disjoint subsets, so the
// total is the componentwise max; optional subsampling amplification applies
// on top.
DpBudget model_budget(const DpBudget& structure, const DpBudget& parameter,
                      std::optional<double> sampling_p = std::nullopt);

struct PerQueryEps {
  double eps_entropy = 0.0;
  double eps_record_count = 0.0;  // kept equal to eps_entropy by convention
  double eps_parameter = 0.0;
};

// Inverts the budget arithmetic: finds per-query epsilons whose composed
// model budget meets the target within 1e-6 relative. Each phase is driven
// to the target independently (the model budget is their max, so both sides
// land on it). Throws BudgetError when the target is unreachable.
PerQueryEps solve_per_query(const DpBudget& target, std::size_t m,
                            std::optional<double> sampling_p = std::nullopt,
                            double delta_structure = 0x1.0p-30,
                            double delta_parameter = 0x1.0p-30);

}  // namespace pdsynth
