#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pdsynth/dataset.hpp"
#include "pdsynth/entropy.hpp"
#include "pdsynth/rng.hpp"

namespace pdsynth {

// All noisy entropies one structure-learning run consumes: per attribute the
// raw and bucketized marginal entropies, and for each ordered pair (a, b)
// the joint entropy of raw a with bucketized b. That is m(m+1) values, each
// perturbed with fresh noise, plus the noisy record count they share.
struct EntropyTable {
  std::vector<double> singles_raw;       // H~(x_i)
  std::vector<double> singles_bucketed;  // H~(bu(x_i))
  std::vector<double> cross;             // H~(x_a, bu(x_b)), row-major a*m+b
  std::uint64_t n_tilde = 0;
  double delta_h = 0.0;

  std::size_t attribute_count() const { return singles_raw.size(); }
  double joint(std::size_t a, std::size_t b) const {
    return cross[a * attribute_count() + b];
  }
  std::size_t entry_count() const {
    const auto m = attribute_count();
    return m * (m + 1);
  }
};

// Pairwise correlations derived from an EntropyTable: raw target against
// bucketized parent.
class TableCorrelation : public CorrelationLookup {
 public:
  explicit TableCorrelation(const EntropyTable& table) : table_(&table) {}
  double corr(std::size_t a, std::size_t b) const override;

 private:
  const EntropyTable* table_;
};

struct DependencyGraph {
  // parents[i] holds the attribute indices feeding attribute i, ascending.
  std::vector<std::vector<std::size_t>> parents;
  // order[t] is the attribute resampled at position t; parents come earlier.
  std::vector<std::size_t> order;

  std::size_t attribute_count() const { return parents.size(); }
  std::size_t position_of(std::size_t attr) const;
  bool is_acyclic_order() const;
};

struct StructureOptions {
  double eps_entropy = 0.1;       // per noisy entropy value
  double eps_record_count = 0.1;  // for the noisy record count
  std::uint64_t maxcost = 10000;  // cap on the parent bucket product
};

struct StructureResult {
  DependencyGraph graph;
  EntropyTable table;
};

// Computes the noisy entropy table from the training subset, then greedily
// grows each attribute's parent set: a candidate is admitted only when it
// strictly improves the merit score, keeps the bucket-product cost within
// maxcost, and keeps the graph acyclic. Targets are processed in ascending
// index order; score ties pick the lowest candidate index.
StructureResult learn_structure(const Dataset& training,
                                const StructureOptions& options, Rng& rng);

// Builds just the noisy entropy table (exposed for tests and diagnostics).
EntropyTable build_entropy_table(const Dataset& training, double eps_entropy,
                                 double eps_record_count, Rng& rng);

// Greedy selection on a caller-supplied correlation lookup; used by
// learn_structure and directly testable with hand-built correlations.
DependencyGraph select_structure(const Schema& schema,
                                 const CorrelationLookup& corr,
                                 std::uint64_t maxcost);

// Text form: one `target <- parent,parent` line per attribute, then a
// `sigma: a,b,c` line with the resampling order. Attribute names throughout.
void write_graph(const DependencyGraph& graph, const Schema& schema,
                 std::ostream& out);
DependencyGraph read_graph(std::istream& in, const Schema& schema);

}  // namespace pdsynth
