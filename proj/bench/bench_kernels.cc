// Copyright 2026 The topicrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <vector>

#include "topicrate/kernels.h"
#include "topicrate/lda.h"
#include "topicrate/synthgen.h"

namespace topicrate {
namespace {

constexpr int kTopics = 20;
constexpr int kVocab = 2000;

const GeneratedCorpus& corpus() {
  static const GeneratedCorpus g = [] {
    GeneratorSpec spec;
    spec.planted_phi = block_topics(kTopics, kVocab, 0.05);
    spec.doc_count = 2000;
    spec.min_doc_len = 50;
    spec.max_doc_len = 150;
    return generate_corpus(spec);
  }();
  return g;
}

const TopicModel& model() {
  static const TopicModel m = [] {
    std::vector<std::string> names;
    for (int w = 0; w < kVocab; ++w) names.push_back("w" + std::to_string(w));
    auto vocab = std::make_shared<const Vocabulary>(
        std::move(names), std::vector<int32_t>(kVocab, 1));
    return TopicModel(block_topics(kTopics, kVocab, 0.05), 0.1, 0.01, vocab);
  }();
  return m;
}

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::kSerial : Execution::kParallel;
}

void BM_DocumentFrequencies(benchmark::State& state) {
  std::vector<std::vector<int32_t>> docs;
  for (const auto& d : corpus().corpus.documents) docs.push_back(d.tokens);
  for (auto _ : state) {
    benchmark::DoNotOptimize(document_frequencies(docs, kVocab, mode(state)));
  }
}
BENCHMARK(BM_DocumentFrequencies)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_InferThetas(benchmark::State& state) {
  InferenceConfig config;
  config.iterations = 50;
  config.burn_in = 25;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        infer_thetas(model(), corpus().corpus.documents, config, mode(state)));
  }
}
BENCHMARK(BM_InferThetas)->Arg(0)->Arg(1)->ArgName("parallel")
    ->Unit(benchmark::kMillisecond);

void BM_LogLikelihoods(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihoods(
        model(), corpus().corpus.documents, corpus().theta, mode(state)));
  }
}
BENCHMARK(BM_LogLikelihoods)->Arg(0)->Arg(1)->ArgName("parallel");

void BM_GibbsSweep(benchmark::State& state) {
  GibbsState s = init_state(corpus().corpus, kTopics, 1);
  for (auto _ : state) gibbs_sweep(s, corpus().corpus, 0.1, 0.01);
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(corpus().corpus.token_count()));
}
BENCHMARK(BM_GibbsSweep)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace topicrate

BENCHMARK_MAIN();
