#include <benchmark/benchmark.h>

#include <limits>
#include <memory>

#include "pdsynth/privacy.hpp"
#include "pdsynth/structure.hpp"

using namespace pdsynth;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Schema bench_schema() {
  std::vector<AttributeSpec> attrs;
  const int cards[] = {8, 6, 10, 5, 8, 6, 4, 2, 12, 5, 2};
  for (std::size_t i = 0; i < 11; ++i) {
    AttributeSpec attr;
    attr.name = "v" + std::to_string(i);
    for (int v = 0; v < cards[i]; ++v) attr.values.push_back(std::to_string(v));
    attrs.push_back(std::move(attr));
  }
  return Schema(std::move(attrs));
}

Dataset bench_data(const Schema& schema, std::size_t n) {
  Dataset data(schema);
  data.reserve(n);
  Rng rng(777);
  std::vector<Value> row(11);
  for (std::size_t i = 0; i < n; ++i) {
    row[0] = static_cast<Value>(rng.uniform_index(8));
    row[1] = static_cast<Value>((row[0] + rng.uniform_index(3)) % 6);
    row[2] = static_cast<Value>((2 * row[1] + rng.uniform_index(4)) % 10);
    row[3] = static_cast<Value>(rng.uniform_index(5));
    row[4] = static_cast<Value>((row[2] + rng.uniform_index(3)) % 8);
    row[5] = static_cast<Value>((row[3] + rng.uniform_index(4)) % 6);
    row[6] = static_cast<Value>(rng.uniform_index(4));
    row[7] = static_cast<Value>(row[0] >= 4 ? 1 : 0);
    row[8] = static_cast<Value>((row[4] + rng.uniform_index(5)) % 12);
    row[9] = static_cast<Value>((row[6] + rng.uniform_index(3)) % 5);
    row[10] = static_cast<Value>((row[1] + row[5]) % 6 >= 3 ? 1 : 0);
    data.append(row);
  }
  return data;
}

struct BenchFixture {
  Schema schema = bench_schema();
  Dataset seeds = bench_data(schema, 50000);
  Dataset training = bench_data(schema, 10000);
  std::unique_ptr<GenerativeModel> model;

  BenchFixture() {
    Rng rng(3);
    auto learned = learn_structure(training, {kInf, kInf, 10000}, rng);
    model = std::make_unique<GenerativeModel>(
        schema, std::move(learned.graph), &training, ModelOptions{kInf, 1.0, 3});
  }
};

BenchFixture& fixture() {
  static BenchFixture f;
  return f;
}

void BM_MechanismStep(benchmark::State& state) {
  auto& f = fixture();
  PrivacyParams params;
  params.k = 50;
  params.gamma = 4.0;
  params.eps0 = 1.0;
  params.max_plausible = 100;
  params.max_check_plausible = 50000;
  const SynthesisParams synth{static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1))};
  std::uint64_t slot = 0;
  for (auto _ : state) {
    Rng rng(derive_seed(51, "slot", slot++));
    auto result = mechanism_step(f.seeds, *f.model, synth, params,
                                 TestKind::Randomized, rng);
    benchmark::DoNotOptimize(result.decision.plausible_count);
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_MechanismStep)->Args({5, 11})->Args({9, 9})->Args({11, 11})
    ->Unit(benchmark::kMicrosecond);

void BM_Synthesize(benchmark::State& state) {
  auto& f = fixture();
  Rng rng(8);
  const auto seed = f.seeds.row(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(synthesize(seed, 11, *f.model, rng));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_Synthesize);

void BM_RecordProbability(benchmark::State& state) {
  auto& f = fixture();
  Rng rng(9);
  const auto seed = f.seeds.row(1);
  const Record candidate = synthesize(seed, 6, *f.model, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        record_probability(*f.model, f.seeds.row(2), candidate.values, 6));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()));
}
BENCHMARK(BM_RecordProbability);

void BM_EntropyTable(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) {
    Rng rng(4);
    benchmark::DoNotOptimize(build_entropy_table(f.training, 0.1, 0.1, rng));
  }
}
BENCHMARK(BM_EntropyTable)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
