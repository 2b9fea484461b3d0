#include <cmath>

#include "doctest.h"
#include "pdsynth/errors.hpp"
#include "pdsynth/metrics.hpp"
#include "pdsynth/synthesis.hpp"
#include "support.hpp"

using namespace pdsynth;
using pdsynth::testing::TableBuilder;

TEST_CASE("total variation distance basics") {
  const double p[] = {0.5, 0.5};
  const double q[] = {0.8, 0.2};
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, q) == doctest::Approx(0.3).epsilon(1e-12));
  const double a[] = {1.0, 0.0};
  const double b[] = {0.0, 1.0};
  CHECK(tv_distance(a, b) == 1.0);
  const double bad[] = {0.5, 0.2};
  CHECK_THROWS_AS(tv_distance(p, bad), InputError);
  const double wide[] = {0.5, 0.25, 0.25};
  CHECK_THROWS_AS(tv_distance(p, wide), InputError);
}

TEST_CASE("tv distance is a metric on random triples") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto draw = [&] {
      std::vector<double> v(4);
      double total = 0.0;
      for (auto& x : v) {
        x = rng.next_open01();
        total += x;
      }
      for (auto& x : v) x /= total;
      return v;
    };
    const auto p = draw(), q = draw(), r = draw();
    const double pq = tv_distance(p, q);
    CHECK(pq == doctest::Approx(tv_distance(q, p)).epsilon(1e-12));
    CHECK(pq >= 0.0);
    CHECK(pq <= 1.0 + 1e-12);
    CHECK(pq <= tv_distance(p, r) + tv_distance(r, q) + 1e-12);
  }
}

TEST_CASE("attribute distributions on small datasets") {
  const Schema schema = testing::make_schema({{"a", 2}, {"b", 3}});
  SUBCASE("single record gives point masses") {
    const Dataset one = testing::make_dataset(schema, {{1, 2}});
    const auto dist = attr_distributions(one);
    CHECK(dist.singles[0] == std::vector<double>{0.0, 1.0});
    CHECK(dist.singles[1] == std::vector<double>{0.0, 0.0, 1.0});
    CHECK(dist.pairs.at({0, 1})[1 * 3 + 2] == 1.0);
  }
  SUBCASE("hand-computed four-record frequencies") {
    const Dataset four =
        testing::make_dataset(schema, {{0, 0}, {0, 1}, {1, 1}, {1, 1}});
    const auto dist = attr_distributions(four);
    CHECK(dist.singles[0][0] == doctest::Approx(0.5));
    CHECK(dist.singles[1][1] == doctest::Approx(0.75));
    CHECK(dist.pairs.at({0, 1})[0 * 3 + 1] == doctest::Approx(0.25));
    CHECK(dist.pairs.at({0, 1})[1 * 3 + 1] == doctest::Approx(0.5));
  }
  SUBCASE("record order does not matter") {
    const Dataset d1 =
        testing::make_dataset(schema, {{0, 0}, {1, 2}, {1, 1}});
    const Dataset d2 =
        testing::make_dataset(schema, {{1, 1}, {0, 0}, {1, 2}});
    const auto a = attr_distributions(d1);
    const auto b = attr_distributions(d2);
    CHECK(a.singles == b.singles);
    CHECK(a.pairs == b.pairs);
  }
}

TEST_CASE("a deterministic model predicts its own data perfectly") {
  const Schema schema = testing::make_schema({{"a", 2}, {"b", 2}});
  GenerativeModel model{schema, testing::chain_graph(2), nullptr,
                        TableBuilder::options()};
  TableBuilder tables;
  tables.add(0, {}, {1.0, 0.0});
  tables.add(1, {0}, {0.0, 1.0});
  tables.add(1, {1}, {1.0, 0.0});
  tables.apply(model);

  // data generated by that point-mass chain: a=0, b=1
  const Dataset data = testing::make_dataset(schema, {{0, 1}, {0, 1}});
  const auto errors = model_error(model, data);
  CHECK(errors[0] == 0.0);
  CHECK(errors[1] == 0.0);
}

TEST_CASE("marginals-only model errs exactly off the modal value") {
  const Schema schema = testing::make_schema({{"a", 3}, {"b", 2}});
  GenerativeModel model{schema, testing::empty_graph(2), nullptr,
                        TableBuilder::options()};
  TableBuilder tables;
  tables.add(0, {}, {0.5, 0.3, 0.2});
  tables.add(1, {}, {0.4, 0.6});
  tables.apply(model);

  Dataset data(schema);
  Rng rng(77);
  std::size_t a_mode_hits = 0, b_mode_hits = 0;
  for (int i = 0; i < 500; ++i) {
    const Value row[2] = {static_cast<Value>(rng.uniform_index(3)),
                          static_cast<Value>(rng.uniform_index(2))};
    data.append(std::span<const Value>(row, 2));
    a_mode_hits += row[0] == 0 ? 1 : 0;
    b_mode_hits += row[1] == 1 ? 1 : 0;
  }
  const auto errors = model_error(model, data);
  CHECK(errors[0] == doctest::Approx(1.0 - a_mode_hits / 500.0).epsilon(1e-12));
  CHECK(errors[1] == doctest::Approx(1.0 - b_mode_hits / 500.0).epsilon(1e-12));
}

TEST_CASE("prediction ties resolve to the smallest value index") {
  const Schema schema = testing::make_schema({{"a", 3}, {"b", 2}});
  GenerativeModel model{schema, testing::empty_graph(2), nullptr,
                        TableBuilder::options()};
  TableBuilder tables;
  tables.add(0, {}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  tables.add(1, {}, {0.5, 0.5});
  tables.apply(model);
  const Dataset data = testing::make_dataset(schema, {{0, 0}, {2, 1}});
  const auto errors = model_error(model, data);
  // argmax is always value 0: record {0,0} predicted right on both attrs
  CHECK(errors[0] == doctest::Approx(0.5));
  CHECK(errors[1] == doctest::Approx(0.5));
}
