#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "pdsynth/dataset.hpp"
#include "pdsynth/rng.hpp"
#include "pdsynth/structure.hpp"

namespace pdsynth {

// One row of a conditional probability table: the target attribute plus the
// bucketized values of its parents, ordered by parent index. An empty value
// vector is the unconditioned (marginal) configuration.
struct ConfigurationKey {
  std::uint32_t attribute = 0;
  std::vector<Value> parent_buckets;

  bool operator==(const ConfigurationKey&) const = default;

  // Canonical byte encoding (attribute index then bucket values, all
  // little-endian) hashed with FNV-1a; model_seed is folded in last. This is
  // the per-configuration RNG seed, so it must never change.
  std::uint64_t stable_hash(std::uint64_t model_seed) const;
};

struct ConditionalTable {
  ConfigurationKey key;
  std::vector<double> alpha;
  std::vector<double> noisy_counts;
  std::vector<double> probs;
};

// Per-value counts of records matching a parent configuration.
std::vector<std::uint64_t> count_vector(const Dataset& data,
                                        std::span<const std::size_t> parents,
                                        const ConfigurationKey& key);

// Independent Laplace noise per component, floored at zero. Real-valued.
std::vector<double> noisy_count_vector(std::span<const std::uint64_t> counts,
                                       double eps_p, Rng& rng);

// Posterior-mean multinomial parameters (alpha_l + n_l) / (sum_a + sum_n).
std::vector<double> posterior_probs(std::span<const double> alpha,
                                    std::span<const double> noisy_counts);

// One Dirichlet draw via normalized gamma variates.
std::vector<double> sample_dirichlet(std::span<const double> concentration,
                                     Rng& rng);

struct ModelOptions {
  double eps_parameter = 1.0;  // per-count Laplace epsilon (inf = no noise)
  double alpha = 1.0;          // uniform Dirichlet hyper-parameter
  std::uint64_t model_seed = 0;
};

// The learned generative model: dependency graph plus a lazily filled cache
// of DP-noised conditional tables. Table values are a pure function of
// (parameter data, graph, schema, options, key), so any two workers --- or
// two processes --- that request the same key observe bit-identical tables.
class GenerativeModel {
 public:
  GenerativeModel(const Schema& schema, DependencyGraph graph,
                  const Dataset* parameter_data, ModelOptions options);

  const Schema& schema() const { return *schema_; }
  const DependencyGraph& graph() const { return graph_; }
  const ModelOptions& options() const { return options_; }
  std::size_t attribute_count() const { return schema_->attribute_count(); }

  // Cached lookup; computes, seeds, noises and caches on first use. The key
  // must list exactly the target's parents (or be empty for a marginal).
  const ConditionalTable& table(const ConfigurationKey& key) const;

  // Conditional table row for `attribute` with parent values taken from the
  // given (full-width) record.
  const ConditionalTable& table_for(std::size_t attribute,
                                    std::span<const Value> record) const;

  // Unconditioned per-attribute table (the baseline synthesizer's source).
  const ConditionalTable& marginal(std::size_t attribute) const;

  ConfigurationKey key_for(std::size_t attribute,
                           std::span<const Value> record) const;

  std::size_t cached_tables() const;

  // Cache persistence: noisy counts per key, canonically ordered so the file
  // is byte-stable. Reloading reproduces identical tables without touching
  // the parameter data.
  void save_cache(std::ostream& out) const;
  void load_cache(std::istream& in);

 private:
  struct KeyHash {
    std::size_t operator()(const ConfigurationKey& k) const {
      return static_cast<std::size_t>(k.stable_hash(0));
    }
  };

  const ConditionalTable& insert_table(ConditionalTable table) const;
  ConditionalTable compute_table(const ConfigurationKey& key) const;
  void validate_key(const ConfigurationKey& key) const;

  const Schema* schema_;
  DependencyGraph graph_;
  const Dataset* parameter_data_;
  ModelOptions options_;

  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<ConfigurationKey,
                             std::unique_ptr<const ConditionalTable>, KeyHash>
      cache_;
};

}  // namespace pdsynth
