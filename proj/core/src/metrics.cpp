#include "pdsynth/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "pdsynth/errors.hpp"

namespace pdsynth {

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InputError("tv_distance: supports differ");
  }
  double sp = 0.0, sq = 0.0, l1 = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    l1 += std::fabs(p[i] - q[i]);
  }
  if (std::fabs(sp - 1.0) > 1e-9 || std::fabs(sq - 1.0) > 1e-9) {
    throw InputError("tv_distance: inputs must sum to 1");
  }
  return 0.5 * l1;
}

AttributeDistributions attr_distributions(const Dataset& data) {
  if (data.size() == 0) {
    throw InputError("attr_distributions: empty dataset");
  }
  const auto& schema = data.schema();
  const std::size_t m = schema.attribute_count();
  const double n = static_cast<double>(data.size());

  AttributeDistributions out;
  out.singles.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.singles[i].assign(schema.attribute(i).cardinality(), 0.0);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      out.pairs[{i, j}].assign(schema.attribute(i).cardinality() *
                                   schema.attribute(j).cardinality(),
                               0.0);
    }
  }
  for (std::size_t r = 0; r < data.size(); ++r) {
    const auto row = data.row(r);
    for (std::size_t i = 0; i < m; ++i) out.singles[i][row[i]] += 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const std::size_t cj = schema.attribute(j).cardinality();
        out.pairs[{i, j}][row[i] * cj + row[j]] += 1.0;
      }
    }
  }
  for (auto& hist : out.singles) {
    for (auto& c : hist) c /= n;
  }
  for (auto& [key, hist] : out.pairs) {
    for (auto& c : hist) c /= n;
  }
  return out;
}

std::vector<double> model_error(const GenerativeModel& model,
                                const Dataset& test) {
  if (test.size() == 0) {
    throw InputError("model_error: empty test set");
  }
  const auto& schema = model.schema();
  const auto& graph = model.graph();
  const std::size_t m = schema.attribute_count();

  // children[i] = attributes whose parent set contains i.
  std::vector<std::vector<std::size_t>> children(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (auto p : graph.parents[j]) children[p].push_back(j);
  }

  std::vector<std::uint64_t> wrong(m, 0);
  std::vector<Value> working(m);
  for (std::size_t r = 0; r < test.size(); ++r) {
    const auto row = test.row(r);
    for (std::size_t target = 0; target < m; ++target) {
      std::copy(row.begin(), row.end(), working.begin());
      Value best = 0;
      double best_score = -1.0;
      const Value card = schema.attribute(target).cardinality();
      for (Value v = 0; v < card; ++v) {
        working[target] = v;
        double score = model.table_for(target, working).probs[v];
        for (auto child : children[target]) {
          score *= model.table_for(child, working).probs[working[child]];
        }
        if (score > best_score) {
          best_score = score;
          best = v;  // strict improvement only: ties keep the smaller index
        }
      }
      if (best != row[target]) ++wrong[target];
    }
  }

  std::vector<double> rates(m);
  for (std::size_t i = 0; i < m; ++i) {
    rates[i] = static_cast<double>(wrong[i]) / static_cast<double>(test.size());
  }
  return rates;
}

}  // namespace pdsynth
