#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pdsynth/model.hpp"

namespace pdsynth {

// Half the L1 distance between two distributions on the same support.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Empirical distributions of every attribute and every attribute pair
// (i < j; the pair table is row-major over (value_i, value_j)). Raw values,
// not buckets.
struct AttributeDistributions {
  std::vector<std::vector<double>> singles;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> pairs;
};

AttributeDistributions attr_distributions(const Dataset& data);

// For each record and each target attribute, predicts the most likely value
// given all other attributes (evaluating only the joint factors that contain
// the target; ties pick the smallest value index) and scores the fraction of
// wrong predictions per attribute.
std::vector<double> model_error(const GenerativeModel& model,
                                const Dataset& test);

}  // namespace pdsynth
