#include "pdsynth/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "pdsynth/errors.hpp"
#include "pdsynth/metrics.hpp"
#include "pdsynth/oracle.hpp"
#include "pdsynth/version.hpp"

namespace pdsynth {

namespace {

std::string hexf(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string decf(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double parse_hexf(const std::string& s) {
  return std::strtod(s.c_str(), nullptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

std::uint64_t row_hash(std::span<const Value> row) {
  std::uint64_t h = kFnvOffset;
  for (Value v : row) h = fnv1a_int(v, h);
  return h;
}

std::vector<double> parse_double_list(const std::string& csv,
                                      const std::string& what) {
  std::vector<double> out;
  std::istringstream in(csv);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    out.push_back(std::strtod(tok.c_str(), nullptr));
  }
  if (out.empty()) throw InputError("verify: empty list for " + what);
  return out;
}

}  // namespace

void write_model_artifact(const ModelArtifact& artifact, const Schema& schema,
                          std::ostream& out) {
  out << "pdsynth-model 1\n";
  out << "tool_version " << kVersion << "\n";
  out << "schema " << artifact.schema_path << "\n";
  out << "dataset " << artifact.dataset_path << "\n";
  out << "fractions " << hexf(artifact.fractions.synthesis) << " "
      << hexf(artifact.fractions.structure) << " "
      << hexf(artifact.fractions.parameter) << "\n";
  out << "seed " << artifact.seed << "\n";
  out << "model_seed " << artifact.model_seed << "\n";
  out << "alpha " << hexf(artifact.alpha) << "\n";
  out << "eps_entropy " << hexf(artifact.eps_entropy) << "\n";
  out << "eps_record_count " << hexf(artifact.eps_record_count) << "\n";
  out << "eps_parameter " << hexf(artifact.eps_parameter) << "\n";
  out << "maxcost " << artifact.maxcost << "\n";
  out << "n_tilde " << artifact.table.n_tilde << "\n";
  out << "delta_h " << hexf(artifact.table.delta_h) << "\n";
  out << "entropies\n";
  const std::size_t m = schema.attribute_count();
  for (std::size_t i = 0; i < m; ++i) {
    out << "raw " << i << " " << hexf(artifact.table.singles_raw[i]) << "\n";
  }
  for (std::size_t i = 0; i < m; ++i) {
    out << "bucket " << i << " " << hexf(artifact.table.singles_bucketed[i])
        << "\n";
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      out << "cross " << a << " " << b << " "
          << hexf(artifact.table.joint(a, b)) << "\n";
    }
  }
  out << "end\n";
  out << "graph\n";
  write_graph(artifact.graph, schema, out);
  out << "end\n";
}

ModelArtifact read_model_artifact(std::istream& in, const Schema& schema) {
  ModelArtifact artifact;
  std::string line;
  if (!std::getline(in, line) || line != "pdsynth-model 1") {
    throw InputError("model artifact: bad header");
  }
  const std::size_t m = schema.attribute_count();
  artifact.table.singles_raw.assign(m, 0.0);
  artifact.table.singles_bucketed.assign(m, 0.0);
  artifact.table.cross.assign(m * m, 0.0);

  enum class Section { Top, Entropies, Graph } section = Section::Top;
  std::ostringstream graph_text;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (section == Section::Graph) {
      if (line == "end") {
        section = Section::Top;
        continue;
      }
      graph_text << line << "\n";
      continue;
    }
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (section == Section::Entropies) {
      if (key == "end") {
        section = Section::Top;
      } else if (key == "raw" || key == "bucket") {
        std::size_t i;
        std::string v;
        row >> i >> v;
        (key == "raw" ? artifact.table.singles_raw
                      : artifact.table.singles_bucketed)[i] = parse_hexf(v);
      } else if (key == "cross") {
        std::size_t a, b;
        std::string v;
        row >> a >> b >> v;
        artifact.table.cross[a * m + b] = parse_hexf(v);
      } else {
        throw InputError("model artifact: bad entropies line '" + line + "'");
      }
      continue;
    }
    if (key == "tool_version") {
      // informational
    } else if (key == "schema") {
      // paths may contain spaces: take the rest of the line
      artifact.schema_path = line.substr(7);
    } else if (key == "dataset") {
      artifact.dataset_path = line.substr(8);
    } else if (key == "fractions") {
      std::string a, b, c;
      row >> a >> b >> c;
      artifact.fractions = {parse_hexf(a), parse_hexf(b), parse_hexf(c)};
    } else if (key == "seed") {
      row >> artifact.seed;
    } else if (key == "model_seed") {
      row >> artifact.model_seed;
    } else if (key == "alpha") {
      std::string v;
      row >> v;
      artifact.alpha = parse_hexf(v);
    } else if (key == "eps_entropy") {
      std::string v;
      row >> v;
      artifact.eps_entropy = parse_hexf(v);
    } else if (key == "eps_record_count") {
      std::string v;
      row >> v;
      artifact.eps_record_count = parse_hexf(v);
    } else if (key == "eps_parameter") {
      std::string v;
      row >> v;
      artifact.eps_parameter = parse_hexf(v);
    } else if (key == "maxcost") {
      row >> artifact.maxcost;
    } else if (key == "n_tilde") {
      row >> artifact.table.n_tilde;
    } else if (key == "delta_h") {
      std::string v;
      row >> v;
      artifact.table.delta_h = parse_hexf(v);
    } else if (key == "entropies") {
      section = Section::Entropies;
    } else if (key == "graph") {
      section = Section::Graph;
    } else {
      throw InputError("model artifact: unknown key '" + key + "'");
    }
  }
  std::istringstream graph_in(graph_text.str());
  artifact.graph = read_graph(graph_in, schema);
  return artifact;
}

PerQueryEps resolve_per_query(const RunConfig& cfg, std::size_t m) {
  const int overrides = (cfg.eps_entropy ? 1 : 0) +
                        (cfg.eps_record_count ? 1 : 0) +
                        (cfg.eps_parameter ? 1 : 0);
  if (overrides == 3) {
    return {*cfg.eps_entropy, *cfg.eps_record_count, *cfg.eps_parameter};
  }
  if (overrides != 0) {
    throw InputError(
        "config: set all of eps_entropy/eps_record_count/eps_parameter or none");
  }
  const double target = cfg.eps_target.value_or(1.0);
  return solve_per_query({target, cfg.delta_target}, m, cfg.sampling_p);
}

BudgetReport compute_budget_report(const RunConfig& cfg, std::size_t m,
                                   const PerQueryEps& eps) {
  BudgetReport report;
  report.per_query = eps;
  report.structure =
      structure_budget(m, eps.eps_entropy, eps.eps_record_count, 0x1.0p-30);
  report.parameter = parameter_budget(m, eps.eps_parameter, 0x1.0p-30);
  report.model = model_budget(report.structure, report.parameter,
                              cfg.sampling_p);
  report.release =
      release_budget(cfg.privacy.k, cfg.privacy.gamma, cfg.privacy.eps0, cfg.t);
  const double n = static_cast<double>(cfg.count);
  report.releases_upper = {report.release.eps * n, report.release.delta * n};
  return report;
}

void write_budget_report(const BudgetReport& report, const RunConfig& cfg,
                         std::ostream& out) {
  out << "per_query eps_entropy=" << decf(report.per_query.eps_entropy)
      << " eps_record_count=" << decf(report.per_query.eps_record_count)
      << " eps_parameter=" << decf(report.per_query.eps_parameter) << "\n";
  out << "structure_learning eps=" << decf(report.structure.eps)
      << " delta=" << decf(report.structure.delta) << "\n";
  out << "parameter_learning eps=" << decf(report.parameter.eps)
      << " delta=" << decf(report.parameter.delta) << "\n";
  out << "model eps=" << decf(report.model.eps)
      << " delta=" << decf(report.model.delta);
  if (cfg.sampling_p) out << " (amplified, p=" << decf(*cfg.sampling_p) << ")";
  out << "\n";
  out << "release k=" << cfg.privacy.k << " gamma=" << decf(cfg.privacy.gamma)
      << " eps0=" << decf(cfg.privacy.eps0) << " t=" << cfg.t
      << " eps=" << decf(report.release.eps)
      << " delta=" << decf(report.release.delta) << "\n";
  out << "releases_upper_bound count=" << cfg.count
      << " eps=" << decf(report.releases_upper.eps)
      << " delta=" << decf(report.releases_upper.delta)
      << " (sequential composition; tighter strategies out of scope)\n";
}

namespace {

void write_meta_common(const RunConfig& cfg, const BudgetReport& budget,
                       std::ostream& out) {
  out << "tool_version " << kVersion << "\n";
  out << "seed " << cfg.seed << "\n";
  out << "k " << cfg.privacy.k << "\n";
  out << "gamma " << decf(cfg.privacy.gamma) << "\n";
  out << "eps0 " << decf(cfg.privacy.eps0) << "\n";
  out << "t " << cfg.t << "\n";
  out << "omega " << cfg.omega_lo << "-" << cfg.omega_hi << "\n";
  out << "max_plausible ";
  if (cfg.privacy.max_plausible == kUnlimited) {
    out << "unlimited\n";
  } else {
    out << cfg.privacy.max_plausible << "\n";
  }
  out << "max_check_plausible ";
  if (cfg.privacy.max_check_plausible == kUnlimited) {
    out << "unlimited\n";
  } else {
    out << cfg.privacy.max_check_plausible << "\n";
  }
  write_budget_report(budget, cfg, out);
}

}  // namespace

LearnResult cmd_learn(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.schema_path.empty() || cfg.dataset_path.empty()) {
    throw InputError("learn: config needs data.schema and data.dataset");
  }
  std::filesystem::create_directories(out_dir);
  const Schema schema = load_schema(cfg.schema_path);
  const std::size_t m = schema.attribute_count();

  LearnResult result;
  const Dataset data = load_dataset(cfg.dataset_path, schema, &result.load);

  Rng partition_rng(derive_seed(cfg.seed, "partition"));
  const Partition split = partition_dataset(data, cfg.fractions, partition_rng);
  result.n_synthesis = split.synthesis.size();
  result.n_structure = split.structure.size();
  result.n_parameter = split.parameter.size();

  const PerQueryEps eps = resolve_per_query(cfg, m);
  if (split.structure.size() > 0 &&
      0x1.0p-30 * static_cast<double>(split.structure.size()) >= 1.0) {
    std::cerr << "warning: composition slack is not << 1/|structure subset|\n";
  }

  Rng structure_rng(derive_seed(cfg.seed, "structure"));
  StructureOptions opts{eps.eps_entropy, eps.eps_record_count, cfg.maxcost};
  StructureResult learned = learn_structure(split.structure, opts, structure_rng);

  result.artifact.schema_path = cfg.schema_path;
  result.artifact.dataset_path = cfg.dataset_path;
  result.artifact.fractions = cfg.fractions;
  result.artifact.seed = cfg.seed;
  result.artifact.model_seed = derive_seed(cfg.seed, "model");
  result.artifact.alpha = cfg.alpha;
  result.artifact.eps_entropy = eps.eps_entropy;
  result.artifact.eps_record_count = eps.eps_record_count;
  result.artifact.eps_parameter = eps.eps_parameter;
  result.artifact.maxcost = cfg.maxcost;
  result.artifact.table = std::move(learned.table);
  result.artifact.graph = std::move(learned.graph);

  const auto dir = std::filesystem::path(out_dir);
  result.model_path = (dir / "model.pds").string();
  {
    auto out = open_out(result.model_path);
    write_model_artifact(result.artifact, schema, out);
  }
  const BudgetReport budget = compute_budget_report(cfg, m, eps);
  {
    auto out = open_out(dir / "budget.txt");
    write_budget_report(budget, cfg, out);
  }
  {
    auto out = open_out(dir / "learn_meta.txt");
    write_meta_common(cfg, budget, out);
    out << "records_loaded " << result.load.loaded << "\n";
    out << "records_dropped " << result.load.dropped << "\n";
    out << "subset_synthesis " << result.n_synthesis << "\n";
    out << "subset_structure " << result.n_structure << "\n";
    out << "subset_parameter " << result.n_parameter << "\n";
  }
  return result;
}

LoadedModel load_model(const RunConfig& cfg) {
  std::string model_path = cfg.model_path;
  if (model_path.empty()) {
    throw InputError("config: data.model must point at a model artifact");
  }
  std::ifstream probe(model_path);
  if (!probe) throw InputError("cannot open model artifact " + model_path);

  // The schema must be loaded before the artifact body can be parsed, so
  // find the recorded schema path first unless the config names one.
  std::string schema_path = cfg.schema_path;
  std::string dataset_path = cfg.dataset_path;
  if (schema_path.empty() || dataset_path.empty()) {
    std::string line;
    while (std::getline(probe, line)) {
      if (schema_path.empty() && line.rfind("schema ", 0) == 0) {
        schema_path = line.substr(7);
      }
      if (dataset_path.empty() && line.rfind("dataset ", 0) == 0) {
        dataset_path = line.substr(8);
      }
      if (line == "entropies") break;
    }
  }
  if (schema_path.empty() || dataset_path.empty()) {
    throw InputError("model artifact lacks schema/dataset paths");
  }

  LoadedModel lm;
  lm.schema = std::make_unique<Schema>(load_schema(schema_path));
  {
    std::ifstream in(model_path);
    lm.artifact = read_model_artifact(in, *lm.schema);
  }
  lm.dataset =
      std::make_unique<Dataset>(load_dataset(dataset_path, *lm.schema));

  Rng partition_rng(derive_seed(lm.artifact.seed, "partition"));
  lm.partition = std::make_unique<Partition>(
      partition_dataset(*lm.dataset, lm.artifact.fractions, partition_rng));

  ModelOptions options{lm.artifact.eps_parameter, lm.artifact.alpha,
                       lm.artifact.model_seed};
  lm.model = std::make_unique<GenerativeModel>(
      *lm.schema, lm.artifact.graph, &lm.partition->parameter, options);
  return lm;
}

GenerateStats cmd_generate(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  LoadedModel lm = load_model(cfg);
  const Dataset& seeds = lm.partition->synthesis;
  if (seeds.size() < cfg.privacy.k) {
    throw InputError("generate: synthesis subset smaller than k");
  }
  SynthesisParams synth{cfg.omega_lo, cfg.omega_hi};
  synth.validate(lm.schema->attribute_count());
  cfg.privacy.validate();

  const auto dir = std::filesystem::path(out_dir);
  auto csv = open_out(dir / "synthetic.csv");
  auto audit = open_out(dir / "audit.log");
  write_dataset_header(*lm.schema, csv);

  const unsigned workers = std::max(1u, cfg.workers);
  const std::uint64_t wave = std::max<std::uint64_t>(workers * 64, 256);
  GenerateStats stats;
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<MechanismResult> results(wave);
  std::uint64_t slot_base = 0;
  bool done = cfg.count == 0;
  while (!done) {
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::uint64_t idx = w; idx < wave; idx += workers) {
            // Candidate slot_base+idx owns an independent stream; the slot
            // index, not the worker id, seeds it.
            Rng rng(derive_seed(cfg.seed, "slot", slot_base + idx));
            results[idx] = mechanism_step(seeds, *lm.model, synth, cfg.privacy,
                                          cfg.test_kind, rng);
          }
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    for (std::uint64_t idx = 0; idx < wave && !done; ++idx) {
      const auto& r = results[idx];
      ++stats.candidates;
      const auto seed_row = seeds.row(r.decision.seed_index);
      char line[256];
      std::snprintf(line, sizeof line,
                    "slot=%llu seed=%016llx omega=%zu i=%llu plausible=%llu "
                    "capped=%d threshold=%.17g verdict=%s",
                    static_cast<unsigned long long>(slot_base + idx),
                    static_cast<unsigned long long>(row_hash(seed_row)),
                    r.decision.omega_used,
                    static_cast<unsigned long long>(r.decision.partition),
                    static_cast<unsigned long long>(r.decision.plausible_count),
                    r.decision.capped ? 1 : 0, r.decision.threshold_used,
                    r.decision.passed ? "pass" : "fail");
      audit << line << "\n";
      if (r.released) {
        write_record(*lm.schema, r.released->values, csv);
        ++stats.released;
        if (stats.released >= cfg.count) done = true;
      } else {
        ++stats.failed;
        if (r.decision.capped) ++stats.capped_failed;
      }
    }
    slot_base += wave;
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (cfg.max_seconds > 0.0 && elapsed >= cfg.max_seconds) done = true;
    if (stats.released == 0 && stats.candidates >= 1000000 &&
        cfg.max_seconds == 0.0) {
      throw InputError(
          "generate: no candidate passed the privacy test after 1e6 attempts");
    }
  }
  stats.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const PerQueryEps eps{lm.artifact.eps_entropy, lm.artifact.eps_record_count,
                        lm.artifact.eps_parameter};
  const BudgetReport budget =
      compute_budget_report(cfg, lm.schema->attribute_count(), eps);
  {
    auto out = open_out(dir / "generate_meta.txt");
    write_meta_common(cfg, budget, out);
    out << "test "
        << (cfg.test_kind == TestKind::Deterministic ? "deterministic"
                                                     : "randomized")
        << "\n";
    out << "workers " << workers << "\n";
    out << "candidates " << stats.candidates << "\n";
    out << "released " << stats.released << "\n";
    out << "failed " << stats.failed << "\n";
    out << "capped_failed " << stats.capped_failed << "\n";
    out << "wall_seconds " << decf(stats.wall_seconds) << "\n";
  }
  return stats;
}

namespace {

struct VerifyToy {
  std::unique_ptr<Schema> schema;
  std::unique_ptr<Dataset> data;
  std::unique_ptr<GenerativeModel> model;
};

VerifyToy built_in_toy() {
  VerifyToy toy;
  std::vector<AttributeSpec> attrs;
  for (const char* name : {"a", "b", "c"}) {
    AttributeSpec attr;
    attr.name = name;
    attr.values = {"0", "1"};
    attrs.push_back(attr);
  }
  toy.schema = std::make_unique<Schema>(std::move(attrs));
  toy.data = std::make_unique<Dataset>(*toy.schema);
  const Value rows[6][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 1},
                            {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
  for (const auto& row : rows) {
    toy.data->append(std::span<const Value>(row, 3));
  }
  DependencyGraph graph;
  graph.parents = {{}, {0}, {1}};
  graph.order = {0, 1, 2};
  ModelOptions options{std::numeric_limits<double>::infinity(), 1.0, 0};
  toy.model = std::make_unique<GenerativeModel>(*toy.schema, std::move(graph),
                                                toy.data.get(), options);
  return toy;
}

VerifyToy file_toy(const RunConfig& cfg) {
  VerifyToy toy;
  toy.schema = std::make_unique<Schema>(load_schema(cfg.verify_schema_path));
  toy.data = std::make_unique<Dataset>(
      load_dataset(cfg.verify_dataset_path, *toy.schema));
  // Chain structure in attribute order; enough for bound sweeps.
  DependencyGraph graph;
  const std::size_t m = toy.schema->attribute_count();
  graph.parents.assign(m, {});
  for (std::size_t i = 1; i < m; ++i) graph.parents[i] = {i - 1};
  graph.order.resize(m);
  for (std::size_t i = 0; i < m; ++i) graph.order[i] = i;
  ModelOptions options{std::numeric_limits<double>::infinity(), 1.0, 0};
  toy.model = std::make_unique<GenerativeModel>(*toy.schema, std::move(graph),
                                                toy.data.get(), options);
  return toy;
}

}  // namespace

VerifyStats cmd_verify(const RunConfig& cfg, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  auto report = open_out(dir / "verify_report.txt");
  VerifyStats stats;

  report << "pdsynth verify report (tool " << kVersion << ")\n";
  report << "== entropy sensitivity sweep ==\n";
  for (std::size_t bins = 1; bins <= cfg.verify_bins_max; ++bins) {
    for (std::uint64_t n = 2; n <= cfg.verify_n_max; ++n) {
      const auto sweep = sensitivity_bruteforce(bins, n);
      ++stats.sweeps;
      if (!sweep.ok()) ++stats.violations;
      report << "bins=" << bins << " n=" << n
             << " histograms=" << sweep.histograms << " moves=" << sweep.moves
             << " observed=" << decf(sweep.max_observed)
             << " bound=" << decf(sweep.bound)
             << (sweep.ok() ? " ok" : " VIOLATION") << "\n";
    }
  }

  report << "== release bound sweep ==\n";
  VerifyToy toy = (!cfg.verify_schema_path.empty() &&
                   !cfg.verify_dataset_path.empty())
                      ? file_toy(cfg)
                      : built_in_toy();
  const auto universe = enumerate_universe(*toy.schema);
  report << "universe=" << universe.size() << " dataset=" << toy.data->size()
         << " omega=" << cfg.verify_omega << "\n";

  const auto ks = parse_double_list(cfg.verify_k_values, "k_values");
  const auto gammas = parse_double_list(cfg.verify_gamma_values, "gamma_values");
  const auto eps0s = parse_double_list(cfg.verify_eps0_values, "eps0_values");
  const auto ts = parse_double_list(cfg.verify_t_values, "t_values");
  const bool distorted =
      cfg.verify_bound_gamma_scale != 1.0 || cfg.verify_bound_delta_scale != 1.0;

  for (double kd : ks) {
    for (double gamma : gammas) {
      for (double eps0 : eps0s) {
        for (double td : ts) {
          const auto k = static_cast<std::uint64_t>(kd);
          const auto t = static_cast<std::uint64_t>(td);
          if (t < 1 || t >= k) continue;
          PrivacyParams params;
          params.k = k;
          params.gamma = gamma;
          params.eps0 = eps0;
          std::optional<DpBudget> bound;
          if (distorted) {
            bound = DpBudget{
                eps0 + std::log1p(cfg.verify_bound_gamma_scale * gamma /
                                  static_cast<double>(t)),
                cfg.verify_bound_delta_scale *
                    std::exp(-eps0 * static_cast<double>(k - t))};
          }
          BoundReport worst;
          bool ok = true;
          for (const auto& extra : universe) {
            const auto r =
                check_release_bound(*toy.data, extra, universe, *toy.model,
                                    cfg.verify_omega, params, t, bound);
            worst.eps = r.eps;
            worst.delta = r.delta;
            worst.worst_add_direction =
                std::max(worst.worst_add_direction, r.worst_add_direction);
            worst.worst_remove_direction = std::max(
                worst.worst_remove_direction, r.worst_remove_direction);
            worst.worst_pass_sandwich =
                std::max(worst.worst_pass_sandwich, r.worst_pass_sandwich);
            worst.worst_partition_monotonicity =
                std::max(worst.worst_partition_monotonicity,
                         r.worst_partition_monotonicity);
            worst.outcomes_checked += r.outcomes_checked;
            worst.sets_checked += r.sets_checked;
            ok = ok && r.ok();
          }
          ++stats.sweeps;
          if (!ok) ++stats.violations;
          report << "k=" << k << " gamma=" << decf(gamma)
                 << " eps0=" << decf(eps0) << " t=" << t
                 << " eps=" << decf(worst.eps) << " delta=" << decf(worst.delta)
                 << " outcomes=" << worst.outcomes_checked
                 << " sets=" << worst.sets_checked
                 << " add_margin=" << decf(worst.worst_add_direction)
                 << " remove_margin=" << decf(worst.worst_remove_direction)
                 << " pass_margin=" << decf(worst.worst_pass_sandwich)
                 << " partition_margin="
                 << decf(worst.worst_partition_monotonicity)
                 << (ok ? " ok" : " VIOLATION") << "\n";
        }
      }
    }
  }
  report << "sweeps=" << stats.sweeps << " violations=" << stats.violations
         << "\n";
  return stats;
}

void cmd_metrics(const RunConfig& cfg, const std::string& out_dir) {
  if (cfg.schema_path.empty() || cfg.dataset_path.empty() ||
      cfg.candidate_path.empty()) {
    throw InputError(
        "metrics: config needs data.schema, data.dataset and data.candidate");
  }
  std::filesystem::create_directories(out_dir);
  const Schema schema = load_schema(cfg.schema_path);
  const Dataset reference = load_dataset(cfg.dataset_path, schema);
  const Dataset candidate = load_dataset(cfg.candidate_path, schema);

  const auto ref_dist = attr_distributions(reference);
  const auto cand_dist = attr_distributions(candidate);

  auto out = open_out(std::filesystem::path(out_dir) / "metrics.csv");
  out << "attribute,metric,value\n";
  for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
    out << schema.attribute(i).name << ",tv_single,"
        << decf(tv_distance(ref_dist.singles[i], cand_dist.singles[i])) << "\n";
  }
  for (const auto& [key, hist] : ref_dist.pairs) {
    out << schema.attribute(key.first).name << "|"
        << schema.attribute(key.second).name << ",tv_pair,"
        << decf(tv_distance(hist, cand_dist.pairs.at(key))) << "\n";
  }
  if (!cfg.model_path.empty()) {
    LoadedModel lm = load_model(cfg);
    const auto errors = model_error(*lm.model, reference);
    for (std::size_t i = 0; i < errors.size(); ++i) {
      out << schema.attribute(i).name << ",model_error," << decf(errors[i])
          << "\n";
    }
  }
}

}  // namespace pdsynth
