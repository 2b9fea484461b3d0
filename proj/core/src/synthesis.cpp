#include "pdsynth/synthesis.hpp"

#include "pdsynth/errors.hpp"

namespace pdsynth {

void SynthesisParams::validate(std::size_t attribute_count) const {
  if (omega_lo < 1 || omega_hi < omega_lo || omega_hi > attribute_count) {
    throw InputError("omega must satisfy 1 <= lo <= hi <= attribute count");
  }
}

Record synthesize(std::span<const Value> seed, std::size_t omega,
                  const GenerativeModel& model, Rng& rng) {
  const std::size_t m = model.attribute_count();
  if (omega < 1 || omega > m) {
    throw InputError("synthesize: omega out of range");
  }
  Record out{{seed.begin(), seed.end()}};
  const auto& order = model.graph().order;
  for (std::size_t t = m - omega; t < m; ++t) {
    const std::size_t attr = order[t];
    const auto& table = model.table_for(attr, out.values);
    out.values[attr] = static_cast<Value>(rng.categorical(table.probs));
  }
  return out;
}

Record synthesize_marginal(const GenerativeModel& model, Rng& rng) {
  const std::size_t m = model.attribute_count();
  Record out{std::vector<Value>(m, 0)};
  for (std::size_t attr = 0; attr < m; ++attr) {
    const auto& table = model.marginal(attr);
    out.values[attr] = static_cast<Value>(rng.categorical(table.probs));
  }
  return out;
}

double record_probability(const GenerativeModel& model,
                          std::span<const Value> seed,
                          std::span<const Value> candidate,
                          std::size_t omega) {
  const std::size_t m = model.attribute_count();
  if (seed.size() != m || candidate.size() != m) {
    throw InputError("record_probability: record width mismatch");
  }
  const auto& order = model.graph().order;
  for (std::size_t t = 0; t < m - omega; ++t) {
    if (seed[order[t]] != candidate[order[t]]) return 0.0;
  }
  // Retained parents equal the seed's values by the agreement above, so the
  // whole product can be evaluated from the candidate.
  double p = 1.0;
  for (std::size_t t = m - omega; t < m; ++t) {
    const std::size_t attr = order[t];
    const auto& table = model.table_for(attr, candidate);
    p *= table.probs[candidate[attr]];
  }
  return p;
}

}  // namespace pdsynth
