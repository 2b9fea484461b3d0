#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include "pdsynth/accounting.hpp"
#include "pdsynth/config.hpp"
#include "pdsynth/model.hpp"

namespace pdsynth {

// Everything cmd_learn persists besides the budget report: the learned graph
// and entropy table plus the inputs needed to rebuild the identical lazy
// model (paths, fractions, seeds, per-query epsilons). Text, hexfloat-coded
// doubles, byte-stable across runs with the same seed.
struct ModelArtifact {
  std::string schema_path;
  std::string dataset_path;
  PartitionFractions fractions;
  std::uint64_t seed = 0;
  std::uint64_t model_seed = 0;
  double alpha = 1.0;
  double eps_entropy = 0.0;
  double eps_record_count = 0.0;
  double eps_parameter = 0.0;
  std::uint64_t maxcost = 0;
  EntropyTable table;
  DependencyGraph graph;
};

void write_model_artifact(const ModelArtifact& artifact, const Schema& schema,
                          std::ostream& out);
ModelArtifact read_model_artifact(std::istream& in, const Schema& schema);

struct BudgetReport {
  PerQueryEps per_query;
  DpBudget structure;
  DpBudget parameter;
  DpBudget model;
  DpBudget release;  // one released record at the configured t
  DpBudget releases_upper;  // sequential-composition bound over `count`
};

BudgetReport compute_budget_report(const RunConfig& cfg, std::size_t m,
                                   const PerQueryEps& eps);
void write_budget_report(const BudgetReport& report, const RunConfig& cfg,
                         std::ostream& out);

// Resolves per-query epsilons: explicit overrides win, otherwise the target
// is handed to solve_per_query.
PerQueryEps resolve_per_query(const RunConfig& cfg, std::size_t m);

struct LearnResult {
  ModelArtifact artifact;
  std::string model_path;
  LoadStats load;
  std::size_t n_synthesis = 0;
  std::size_t n_structure = 0;
  std::size_t n_parameter = 0;
};

LearnResult cmd_learn(const RunConfig& cfg, const std::string& out_dir);

// A model artifact re-hydrated against its data: owns the schema, the full
// dataset, the partition and the lazy generative model (pointer-stable).
struct LoadedModel {
  std::unique_ptr<Schema> schema;
  std::unique_ptr<Dataset> dataset;
  std::unique_ptr<Partition> partition;
  ModelArtifact artifact;
  std::unique_ptr<GenerativeModel> model;
};

LoadedModel load_model(const RunConfig& cfg);

struct GenerateStats {
  std::uint64_t released = 0;
  std::uint64_t candidates = 0;
  std::uint64_t failed = 0;
  std::uint64_t capped_failed = 0;
  double wall_seconds = 0.0;
};

// Deterministic parallel generation: candidate g draws its whole randomness
// from (seed, g), workers split the slot range, and output is emitted in
// slot order, so any worker count yields byte-identical CSV and audit log.
GenerateStats cmd_generate(const RunConfig& cfg, const std::string& out_dir);

struct VerifyStats {
  std::uint64_t sweeps = 0;
  std::uint64_t violations = 0;
};

VerifyStats cmd_verify(const RunConfig& cfg, const std::string& out_dir);

void cmd_metrics(const RunConfig& cfg, const std::string& out_dir);

}  // namespace pdsynth
