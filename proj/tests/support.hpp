#pragma once

#include <boost/math/distributions/chi_squared.hpp>
#include <cstdio>
#include <initializer_list>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pdsynth/dataset.hpp"
#include "pdsynth/model.hpp"

namespace pdsynth::testing {

// Schema with identity buckets and value labels "0".."card-1".
inline Schema make_schema(
    std::initializer_list<std::pair<std::string, int>> attrs) {
  std::vector<AttributeSpec> specs;
  for (const auto& [name, card] : attrs) {
    AttributeSpec spec;
    spec.name = name;
    for (int v = 0; v < card; ++v) spec.values.push_back(std::to_string(v));
    specs.push_back(std::move(spec));
  }
  return Schema(std::move(specs));
}

inline Dataset make_dataset(const Schema& schema,
                            std::initializer_list<std::vector<Value>> rows) {
  Dataset data(schema);
  for (const auto& row : rows) data.append(std::span<const Value>(row));
  return data;
}

// Chain dependency graph 0 -> 1 -> ... -> m-1 in attribute order.
inline DependencyGraph chain_graph(std::size_t m) {
  DependencyGraph graph;
  graph.parents.assign(m, {});
  for (std::size_t i = 1; i < m; ++i) graph.parents[i] = {i - 1};
  graph.order.resize(m);
  for (std::size_t i = 0; i < m; ++i) graph.order[i] = i;
  return graph;
}

inline DependencyGraph empty_graph(std::size_t m) {
  DependencyGraph graph;
  graph.parents.assign(m, {});
  graph.order.resize(m);
  for (std::size_t i = 0; i < m; ++i) graph.order[i] = i;
  return graph;
}

// Injects exact table rows through the cache-persistence interface. Alpha is
// kept tiny so the posterior reproduces `probs` up to ~1e-12.
class TableBuilder {
 public:
  void add(std::uint32_t attribute, std::vector<Value> parent_buckets,
           const std::vector<double>& probs) {
    entries_ << attribute << " |";
    for (Value v : parent_buckets) entries_ << " " << v;
    entries_ << " |";
    char buf[64];
    for (double p : probs) {
      std::snprintf(buf, sizeof buf, " %a", p * 1048576.0);
      entries_ << buf;
    }
    entries_ << "\n";
  }

  void apply(GenerativeModel& model) const {
    std::istringstream in("pdsynth-table-cache 1\n" + entries_.str());
    model.load_cache(in);
  }

  static ModelOptions options() {
    return {std::numeric_limits<double>::infinity(), 1e-9, 0};
  }

 private:
  std::ostringstream entries_;
};

// Upper-tail p-value of a chi-squared statistic.
inline double chi_squared_p(double stat, double dof) {
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Pearson goodness-of-fit p-value of observed counts against expected
// probabilities (cells with expected mass < 1e-12 must stay empty).
inline double gof_p_value(const std::vector<std::uint64_t>& observed,
                          const std::vector<double>& expected_probs,
                          std::uint64_t total) {
  double stat = 0.0;
  int dof = -1;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = expected_probs[i] * static_cast<double>(total);
    if (e < 1e-12) {
      if (observed[i] != 0) return 0.0;
      continue;
    }
    const double d = static_cast<double>(observed[i]) - e;
    stat += d * d / e;
    ++dof;
  }
  if (dof <= 0) return 1.0;
  return chi_squared_p(stat, dof);
}

}  // namespace pdsynth::testing
