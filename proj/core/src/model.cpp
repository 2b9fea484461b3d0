#include "pdsynth/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>

#include "pdsynth/errors.hpp"

namespace pdsynth {

std::uint64_t ConfigurationKey::stable_hash(std::uint64_t model_seed) const {
  std::uint64_t h = kFnvOffset;
  h = fnv1a_int(attribute, h);
  for (Value v : parent_buckets) {
    h = fnv1a_int(static_cast<std::uint32_t>(v), h);
  }
  h = fnv1a_int(model_seed, h);
  return h;
}

std::vector<std::uint64_t> count_vector(const Dataset& data,
                                        std::span<const std::size_t> parents,
                                        const ConfigurationKey& key) {
  const auto& schema = data.schema();
  const std::size_t attr = key.attribute;
  std::vector<std::uint64_t> counts(schema.attribute(attr).cardinality(), 0);
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    bool match = true;
    for (std::size_t j = 0; j < parents.size(); ++j) {
      if (schema.bucket_of(parents[j], row[parents[j]]) !=
          key.parent_buckets[j]) {
        match = false;
        break;
      }
    }
    if (match) ++counts[row[attr]];
  }
  return counts;
}

std::vector<double> noisy_count_vector(std::span<const std::uint64_t> counts,
                                       double eps_p, Rng& rng) {
  if (!(eps_p > 0.0)) {
    throw std::invalid_argument("noisy_count_vector: epsilon must be positive");
  }
  const double scale = std::isinf(eps_p) ? 0.0 : 1.0 / eps_p;
  std::vector<double> noisy(counts.size());
  for (std::size_t l = 0; l < counts.size(); ++l) {
    noisy[l] =
        std::max(0.0, static_cast<double>(counts[l]) + rng.laplace(scale));
  }
  return noisy;
}

std::vector<double> posterior_probs(std::span<const double> alpha,
                                    std::span<const double> noisy_counts) {
  double total = 0.0;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    if (!(alpha[l] > 0.0)) {
      throw std::invalid_argument("posterior_probs: alpha must be positive");
    }
    total += alpha[l] + noisy_counts[l];
  }
  std::vector<double> probs(alpha.size());
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    probs[l] = (alpha[l] + noisy_counts[l]) / total;
  }
  return probs;
}

std::vector<double> sample_dirichlet(std::span<const double> concentration,
                                     Rng& rng) {
  std::vector<double> draw(concentration.size());
  double total = 0.0;
  for (std::size_t l = 0; l < concentration.size(); ++l) {
    if (!(concentration[l] > 0.0)) {
      throw std::invalid_argument("sample_dirichlet: parameters must be positive");
    }
    draw[l] = rng.gamma(concentration[l]);
    total += draw[l];
  }
  for (auto& d : draw) d /= total;
  return draw;
}

GenerativeModel::GenerativeModel(const Schema& schema, DependencyGraph graph,
                                 const Dataset* parameter_data,
                                 ModelOptions options)
    : schema_(&schema),
      graph_(std::move(graph)),
      parameter_data_(parameter_data),
      options_(options) {
  if (graph_.parents.size() != schema.attribute_count()) {
    throw InputError("model: graph does not match schema width");
  }
  if (!(options_.alpha > 0.0)) {
    throw InputError("model: alpha must be positive");
  }
}

void GenerativeModel::validate_key(const ConfigurationKey& key) const {
  if (key.attribute >= schema_->attribute_count()) {
    throw InputError("model: key names an unknown attribute");
  }
  if (key.parent_buckets.empty()) return;  // marginal configuration
  const auto& parents = graph_.parents[key.attribute];
  if (key.parent_buckets.size() != parents.size()) {
    throw InputError("model: key arity does not match the parent set");
  }
  for (std::size_t j = 0; j < parents.size(); ++j) {
    if (key.parent_buckets[j] >= schema_->bucket_count(parents[j])) {
      throw InputError("model: key bucket value out of range");
    }
  }
}

ConditionalTable GenerativeModel::compute_table(
    const ConfigurationKey& key) const {
  ConditionalTable table;
  table.key = key;
  const std::size_t card = schema_->attribute(key.attribute).cardinality();
  table.alpha.assign(card, options_.alpha);

  std::vector<std::uint64_t> counts;
  if (parameter_data_ != nullptr) {
    const std::span<const std::size_t> parents =
        key.parent_buckets.empty()
            ? std::span<const std::size_t>{}
            : std::span<const std::size_t>(graph_.parents[key.attribute]);
    counts = count_vector(*parameter_data_, parents, key);
  } else {
    counts.assign(card, 0);  // prior-only model
  }

  Rng stream(key.stable_hash(options_.model_seed));
  table.noisy_counts =
      noisy_count_vector(counts, options_.eps_parameter, stream);
  table.probs = posterior_probs(table.alpha, table.noisy_counts);
  return table;
}

const ConditionalTable& GenerativeModel::insert_table(
    ConditionalTable table) const {
  // The key must outlive the move of `table` into the node (argument
  // evaluation order is unspecified).
  ConfigurationKey key = table.key;
  std::unique_lock lock(mutex_);
  // Losing an insert race is fine: both sides computed the same value.
  auto [it, inserted] = cache_.try_emplace(
      std::move(key), std::make_unique<const ConditionalTable>(std::move(table)));
  return *it->second;
}

const ConditionalTable& GenerativeModel::table(
    const ConfigurationKey& key) const {
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  validate_key(key);
  return insert_table(compute_table(key));
}

ConfigurationKey GenerativeModel::key_for(std::size_t attribute,
                                          std::span<const Value> record) const {
  ConfigurationKey key;
  key.attribute = static_cast<std::uint32_t>(attribute);
  const auto& parents = graph_.parents[attribute];
  key.parent_buckets.reserve(parents.size());
  for (auto p : parents) {
    key.parent_buckets.push_back(schema_->bucket_of(p, record[p]));
  }
  return key;
}

const ConditionalTable& GenerativeModel::table_for(
    std::size_t attribute, std::span<const Value> record) const {
  thread_local ConfigurationKey scratch;
  scratch.attribute = static_cast<std::uint32_t>(attribute);
  scratch.parent_buckets.clear();
  for (auto p : graph_.parents[attribute]) {
    scratch.parent_buckets.push_back(schema_->bucket_of(p, record[p]));
  }
  return table(scratch);
}

const ConditionalTable& GenerativeModel::marginal(std::size_t attribute) const {
  ConfigurationKey key;
  key.attribute = static_cast<std::uint32_t>(attribute);
  if (graph_.parents[attribute].empty()) return table(key);
  {
    std::shared_lock lock(mutex_);
    const auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;
  }
  return insert_table(compute_table(key));
}

std::size_t GenerativeModel::cached_tables() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

void GenerativeModel::save_cache(std::ostream& out) const {
  std::vector<const ConditionalTable*> tables;
  {
    std::shared_lock lock(mutex_);
    tables.reserve(cache_.size());
    for (const auto& [key, table] : cache_) tables.push_back(table.get());
  }
  std::sort(tables.begin(), tables.end(),
            [](const ConditionalTable* a, const ConditionalTable* b) {
              if (a->key.attribute != b->key.attribute)
                return a->key.attribute < b->key.attribute;
              return a->key.parent_buckets < b->key.parent_buckets;
            });
  out << "pdsynth-table-cache 1\n";
  char buf[64];
  for (const auto* t : tables) {
    out << t->key.attribute;
    out << " |";
    for (Value v : t->key.parent_buckets) out << " " << v;
    out << " |";
    for (double c : t->noisy_counts) {
      std::snprintf(buf, sizeof buf, " %a", c);
      out << buf;
    }
    out << "\n";
  }
}

void GenerativeModel::load_cache(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "pdsynth-table-cache 1") {
    throw InputError("table cache: bad header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    ConfigurationKey key;
    std::string tok;
    row >> key.attribute;
    row >> tok;  // first separator
    if (tok != "|") throw InputError("table cache: malformed entry");
    while (row >> tok && tok != "|") {
      key.parent_buckets.push_back(static_cast<Value>(std::stoul(tok)));
    }
    validate_key(key);
    ConditionalTable table;
    table.key = key;
    const std::size_t card = schema_->attribute(key.attribute).cardinality();
    table.alpha.assign(card, options_.alpha);
    while (row >> tok) {
      table.noisy_counts.push_back(std::strtod(tok.c_str(), nullptr));
    }
    if (table.noisy_counts.size() != card) {
      throw InputError("table cache: count vector has wrong arity");
    }
    table.probs = posterior_probs(table.alpha, table.noisy_counts);
    insert_table(std::move(table));
  }
}

}  // namespace pdsynth
