#include "pdsynth/structure.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "pdsynth/errors.hpp"

namespace pdsynth {

namespace {

std::vector<std::uint64_t> single_histogram(const Dataset& data,
                                            std::size_t attr, bool bucketed) {
  const auto& schema = data.schema();
  const std::size_t bins =
      bucketed ? schema.bucket_count(attr) : schema.attribute(attr).cardinality();
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const Value v = data.row(r)[attr];
    ++hist[bucketed ? schema.bucket_of(attr, v) : v];
  }
  return hist;
}

std::vector<std::uint64_t> joint_histogram(const Dataset& data, std::size_t a,
                                           std::size_t b) {
  const auto& schema = data.schema();
  const std::size_t ca = schema.attribute(a).cardinality();
  const std::size_t cb = schema.bucket_count(b);
  std::vector<std::uint64_t> hist(ca * cb, 0);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    ++hist[row[a] * cb + schema.bucket_of(b, row[b])];
  }
  return hist;
}

// True if `to` is reachable from `from` along parent->target edges.
bool reachable(const std::vector<std::vector<std::size_t>>& children,
               std::size_t from, std::size_t to) {
  if (from == to) return true;
  std::vector<std::size_t> stack{from};
  std::vector<bool> seen(children.size(), false);
  seen[from] = true;
  while (!stack.empty()) {
    const auto node = stack.back();
    stack.pop_back();
    for (auto next : children[node]) {
      if (next == to) return true;
      if (!seen[next]) {
        seen[next] = true;
        stack.push_back(next);
      }
    }
  }
  return false;
}

std::vector<std::size_t> topological_order(
    const std::vector<std::vector<std::size_t>>& parents) {
  const std::size_t m = parents.size();
  std::vector<std::size_t> remaining(m);
  for (std::size_t i = 0; i < m; ++i) remaining[i] = parents[i].size();
  std::vector<bool> placed(m, false);
  std::vector<std::size_t> order;
  order.reserve(m);
  while (order.size() < m) {
    std::size_t pick = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (!placed[i] && remaining[i] == 0) {
        pick = i;
        break;
      }
    }
    if (pick == m) {
      throw std::logic_error("topological_order: graph has a cycle");
    }
    placed[pick] = true;
    order.push_back(pick);
    for (std::size_t i = 0; i < m; ++i) {
      if (placed[i]) continue;
      for (auto p : parents[i]) {
        if (p == pick) --remaining[i];
      }
    }
  }
  return order;
}

}  // namespace

double TableCorrelation::corr(std::size_t a, std::size_t b) const {
  return correlation(table_->singles_raw[a], table_->singles_bucketed[b],
                     table_->joint(a, b));
}

std::size_t DependencyGraph::position_of(std::size_t attr) const {
  for (std::size_t t = 0; t < order.size(); ++t) {
    if (order[t] == attr) return t;
  }
  throw std::logic_error("position_of: attribute not in order");
}

bool DependencyGraph::is_acyclic_order() const {
  std::vector<std::size_t> pos(order.size());
  for (std::size_t t = 0; t < order.size(); ++t) pos[order[t]] = t;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    for (auto p : parents[i]) {
      if (pos[p] >= pos[i]) return false;
    }
  }
  return true;
}

EntropyTable build_entropy_table(const Dataset& training, double eps_entropy,
                                 double eps_record_count, Rng& rng) {
  if (training.size() < 2) {
    throw InputError("structure learning: training subset needs >= 2 records");
  }
  const auto& schema = training.schema();
  const std::size_t m = schema.attribute_count();

  EntropyTable table;
  table.n_tilde = noisy_record_count(training.size(), eps_record_count, rng);
  table.delta_h = entropy_sensitivity(table.n_tilde);

  // Noise draws happen in one canonical order (raw singles, bucketized
  // singles, then cross pairs row-major) so runs are seed-deterministic.
  table.singles_raw.resize(m);
  table.singles_bucketed.resize(m);
  table.cross.assign(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double h = entropy_bits(single_histogram(training, i, false));
    table.singles_raw[i] = noisy_entropy(h, table.delta_h, eps_entropy, rng);
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double h = entropy_bits(single_histogram(training, i, true));
    table.singles_bucketed[i] =
        noisy_entropy(h, table.delta_h, eps_entropy, rng);
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      const double h = entropy_bits(joint_histogram(training, a, b));
      table.cross[a * m + b] =
          noisy_entropy(h, table.delta_h, eps_entropy, rng);
    }
  }
  return table;
}

DependencyGraph select_structure(const Schema& schema,
                                 const CorrelationLookup& corr,
                                 std::uint64_t maxcost) {
  const std::size_t m = schema.attribute_count();
  DependencyGraph graph;
  graph.parents.assign(m, {});
  std::vector<std::vector<std::size_t>> children(m);

  for (std::size_t target = 0; target < m; ++target) {
    auto& parents = graph.parents[target];
    double current = 0.0;  // empty set scores 0
    for (;;) {
      std::size_t best = m;
      double best_score = current;
      std::vector<std::size_t> trial;
      for (std::size_t cand = 0; cand < m; ++cand) {
        if (cand == target) continue;
        if (std::find(parents.begin(), parents.end(), cand) != parents.end())
          continue;
        trial = parents;
        trial.push_back(cand);
        if (parent_cost(trial, schema) > maxcost) continue;
        // Edge cand -> target closes a cycle iff target already reaches cand.
        if (reachable(children, target, cand)) continue;
        const double score = merit(trial, target, corr);
        if (score > best_score) {
          best_score = score;
          best = cand;
        }
      }
      if (best == m) break;
      parents.push_back(best);
      std::sort(parents.begin(), parents.end());
      children[best].push_back(target);
      current = best_score;
    }
  }
  graph.order = topological_order(graph.parents);
  return graph;
}

StructureResult learn_structure(const Dataset& training,
                                const StructureOptions& options, Rng& rng) {
  StructureResult result;
  result.table = build_entropy_table(training, options.eps_entropy,
                                     options.eps_record_count, rng);
  const TableCorrelation corr(result.table);
  result.graph = select_structure(training.schema(), corr, options.maxcost);
  return result;
}

void write_graph(const DependencyGraph& graph, const Schema& schema,
                 std::ostream& out) {
  for (std::size_t i = 0; i < graph.parents.size(); ++i) {
    out << schema.attribute(i).name << " <-";
    for (std::size_t j = 0; j < graph.parents[i].size(); ++j) {
      out << (j ? "," : " ") << schema.attribute(graph.parents[i][j]).name;
    }
    out << "\n";
  }
  out << "sigma:";
  for (std::size_t t = 0; t < graph.order.size(); ++t) {
    out << (t ? "," : " ") << schema.attribute(graph.order[t]).name;
  }
  out << "\n";
}

DependencyGraph read_graph(std::istream& in, const Schema& schema) {
  const std::size_t m = schema.attribute_count();
  DependencyGraph graph;
  graph.parents.assign(m, {});
  std::string line;
  bool have_sigma = false;
  auto lookup = [&](const std::string& name) {
    const auto idx = schema.index_of(name);
    if (idx == Schema::npos) {
      throw InputError("graph: unknown attribute '" + name + "'");
    }
    return idx;
  };
  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    const auto b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    line = strip(line);
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("sigma:", 0) == 0) {
      std::istringstream rest(line.substr(6));
      std::string name;
      while (std::getline(rest, name, ',')) {
        graph.order.push_back(lookup(strip(name)));
      }
      have_sigma = true;
      continue;
    }
    const auto arrow = line.find("<-");
    if (arrow == std::string::npos) {
      throw InputError("graph: malformed line '" + line + "'");
    }
    const auto target = lookup(strip(line.substr(0, arrow)));
    std::istringstream rest(line.substr(arrow + 2));
    std::string name;
    while (std::getline(rest, name, ',')) {
      name = strip(name);
      if (!name.empty()) graph.parents[target].push_back(lookup(name));
    }
    std::sort(graph.parents[target].begin(), graph.parents[target].end());
  }
  if (!have_sigma || graph.order.size() != m) {
    throw InputError("graph: missing or incomplete sigma order");
  }
  if (!graph.is_acyclic_order()) {
    throw InputError("graph: sigma is not a topological order of the edges");
  }
  return graph;
}

}  // namespace pdsynth
