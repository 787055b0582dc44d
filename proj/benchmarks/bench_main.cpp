// Copyright 2026 The SHDH Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <map>

#include "fixtures.hpp"
#include "shdh/index.hpp"
#include "shdh/model.hpp"
#include "shdh/synthetic.hpp"
#include "shdh/train.hpp"

namespace {

using namespace shdh;

constexpr std::size_t kDatabase = 100000;

struct Corpus {
  SegmentLayout layout;
  CodeDatabase db;
  BinaryCode query;
};

const Corpus& corpus(int bits) {
  static std::map<int, Corpus> cache;
  auto it = cache.find(bits);
  if (it == cache.end()) {
    Rng rng(static_cast<std::uint64_t>(bits));
    const auto layout = segment_layout(bits, 4);
    CodeDatabase db(layout);
    db.reserve(kDatabase);
    for (std::size_t i = 0; i < kDatabase; ++i) db.append(pack(testing::random_logical(rng, bits), layout));
    it = cache.emplace(bits, Corpus{layout, std::move(db), pack(testing::random_logical(rng, bits), layout)}).first;
  }
  return it->second;
}

void BM_ScanLookupTable(benchmark::State& state) {
  const Corpus& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const QueryLUT lut = build_query_lut(c.query.bytes, c.layout);
    double sum = 0.0;
    for (std::size_t i = 0; i < c.db.size(); ++i) sum += lut.distance(c.db.code(i).data());
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.db.size()));
}

void BM_ScanPopcount(benchmark::State& state) {
  const Corpus& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    double sum = 0.0;
    for (std::size_t i = 0; i < c.db.size(); ++i) sum += weighted_distance(c.query.bytes, c.db.code(i), c.layout);
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.db.size()));
}

void BM_TopnLookupTable(benchmark::State& state) {
  const Corpus& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(search_topn(c.db, c.query.bytes, 100));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.db.size()));
}

void BM_TopnBruteForce(benchmark::State& state) {
  const Corpus& c = corpus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_topn(c.db, c.query.bytes, 100));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.db.size()));
}

BENCHMARK(BM_ScanLookupTable)->Arg(32)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanPopcount)->Arg(32)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopnLookupTable)->Arg(32)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TopnBruteForce)->Arg(32)->Arg(48)->Arg(64)->Unit(benchmark::kMillisecond);

const SyntheticData& synthetic() {
  static const SyntheticData data = make_synthetic(SyntheticConfig{});
  return data;
}

void BM_EncodeBatch(benchmark::State& state) {
  const auto& d = synthetic();
  const auto layout = segment_layout(32, 3);
  const HashModel model = init_model(Architecture{64, {512, 512}, 32}, layout, 1);
  for (auto _ : state) benchmark::DoNotOptimize(encode_batch(model, d.train_features));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(d.train_features.rows()));
}
BENCHMARK(BM_EncodeBatch)->Unit(benchmark::kMillisecond);

void BM_BackpropStep(benchmark::State& state) {
  const auto& d = synthetic();
  const auto layout = segment_layout(32, 3);
  HashModel model = init_model(Architecture{64, {512, 512}, 32}, layout, 1);
  BatchSampler sampler(7);
  const auto rows = sampler.sample(d.train_features.rows(), static_cast<std::size_t>(state.range(0)));
  std::vector<NodeId> labels;
  for (const auto r : rows) labels.push_back(d.train_labels.labels[r]);
  const Eigen::MatrixXd x = gather_rows(d.train_features, rows);
  TrainConfig config;
  for (auto _ : state) {
    // A tiny step keeps the model finite over many iterations.
    benchmark::DoNotOptimize(backprop_step(model, x, labels, d.taxonomy, config, 1e-12));
  }
}
BENCHMARK(BM_BackpropStep)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
