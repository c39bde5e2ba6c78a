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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "test_support.h"
#include "topicrate/errors.h"
#include "topicrate/kernels.h"
#include "topicrate/lda.h"
#include "topicrate/synthgen.h"

namespace topicrate {
namespace {

using testing::make_corpus;

Corpus random_corpus(int docs, int length, int vocab, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<int32_t>> ids(docs);
  for (auto& d : ids) {
    for (int i = 0; i < length; ++i) {
      d.push_back(static_cast<int32_t>(rng.below(vocab)));
    }
  }
  return make_corpus(ids, vocab);
}

TopicModel fixed_model(Matrix phi, double alpha = 0.1) {
  std::vector<std::string> names;
  for (std::size_t w = 0; w < phi.cols(); ++w) names.push_back("t" + std::to_string(w));
  auto vocab = std::make_shared<const Vocabulary>(
      std::move(names), std::vector<int32_t>(phi.cols(), 1));
  return TopicModel(std::move(phi), alpha, 0.01, vocab);
}

TEST(InitState, SingleTopic) {
  const Corpus c = random_corpus(5, 20, 10, 1);
  const GibbsState s = init_state(c, 1, 9);
  for (const auto& z : s.assignments) {
    for (int32_t k : z) EXPECT_EQ(k, 0);
  }
  EXPECT_EQ(s.topic_total[0], 100);
  EXPECT_TRUE(s.counts_consistent(c));
}

TEST(InitState, Deterministic) {
  const Corpus c = random_corpus(5, 20, 10, 1);
  EXPECT_EQ(init_state(c, 3, 9), init_state(c, 3, 9));
  EXPECT_NE(init_state(c, 3, 9).assignments, init_state(c, 3, 10).assignments);
}

// 10,000 fair draws: sd of the share is 0.005, so [0.47, 0.53] is +-6 sd.
TEST(InitState, UniformTopicShare) {
  const Corpus c = random_corpus(100, 100, 50, 2);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const GibbsState s = init_state(c, 2, seed);
    const double share = static_cast<double>(s.topic_total[0]) / 10000.0;
    EXPECT_GE(share, 0.47);
    EXPECT_LE(share, 0.53);
  }
}

TEST(InitState, Errors) {
  const Corpus c = random_corpus(2, 5, 4, 1);
  EXPECT_THROW(init_state(c, 0, 1), InvalidArgument);
  EXPECT_THROW(init_state(Corpus{}, 2, 1), EmptyCorpus);
}

TEST(GibbsSweep, SingleTopicOnlyAdvancesRng) {
  const Corpus c = random_corpus(4, 10, 6, 3);
  GibbsState s = init_state(c, 1, 5);
  const GibbsState before = s;
  gibbs_sweep(s, c, 0.1, 0.01);
  EXPECT_EQ(s.assignments, before.assignments);
  EXPECT_EQ(s.doc_topic, before.doc_topic);
  EXPECT_EQ(s.word_topic, before.word_topic);
  EXPECT_FALSE(s.rng == before.rng);
}

TEST(GibbsSweep, SymmetricSingleToken) {
  const Corpus c = make_corpus({{0}}, 1);
  GibbsState s = init_state(c, 2, 8);
  int zero = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    gibbs_sweep(s, c, 0.3, 0.2);
    zero += s.assignments[0][0] == 0;
  }
  // sd of the share is about 0.0016.
  EXPECT_NEAR(static_cast<double>(zero) / n, 0.5, 0.01);
}

TEST(GibbsSweep, CountsStayConsistent) {
  const Corpus c = random_corpus(20, 30, 15, 4);
  GibbsState s = init_state(c, 4, 2);
  for (int i = 0; i < 25; ++i) {
    gibbs_sweep(s, c, 0.1, 0.01);
    ASSERT_TRUE(s.counts_consistent(c));
  }
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    int total = 0;
    for (int k = 0; k < 4; ++k) total += s.doc_topic_count(d, k);
    EXPECT_EQ(total, static_cast<int>(c.documents[d].tokens.size()));
  }
}

// Eight tokens, K = 2: the empirical distribution over the 256 assignment
// vectors against exhaustive enumeration of the collapsed joint.
TEST(GibbsSweep, MatchesEnumeratedPosterior) {
  const Corpus c = make_corpus({{0, 1, 1, 2}, {2, 2, 0, 1}}, 3);
  const double alpha = 0.3, beta = 0.7;
  std::vector<double> exact(256);
  double norm = 0.0;
  for (int code = 0; code < 256; ++code) {
    std::vector<std::vector<int32_t>> z(2, std::vector<int32_t>(4));
    for (int i = 0; i < 8; ++i) z[i / 4][i % 4] = (code >> i) & 1;
    exact[code] = std::exp(testing::log_joint(c, z, 2, alpha, beta));
    norm += exact[code];
  }
  GibbsState s = init_state(c, 2, 77);
  for (int i = 0; i < 1000; ++i) gibbs_sweep(s, c, alpha, beta);
  std::vector<double> freq(256, 0.0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    gibbs_sweep(s, c, alpha, beta);
    int code = 0;
    for (int t = 0; t < 8; ++t) code |= s.assignments[t / 4][t % 4] << t;
    freq[code] += 1.0 / n;
  }
  double tv = 0.0;
  for (int code = 0; code < 256; ++code) {
    tv += std::abs(freq[code] - exact[code] / norm);
  }
  EXPECT_LT(0.5 * tv, 0.05);
}

TEST(TrainLda, SingleTopicIsSmoothedUnigram) {
  const Corpus c = random_corpus(6, 15, 8, 5);
  TrainConfig config;
  config.num_topics = 1;
  config.iterations = 5;
  config.burn_in = 1;
  const TopicModel m = train_lda(c, config);
  std::vector<int> counts(8, 0);
  for (const auto& d : c.documents) {
    for (int32_t w : d.tokens) ++counts[w];
  }
  for (int w = 0; w < 8; ++w) {
    EXPECT_NEAR(m.phi(0, w), (counts[w] + 0.01) / (90 + 8 * 0.01), 1e-12);
  }
}

TEST(TrainLda, EstimatesFollowFinalState) {
  const Corpus c = random_corpus(10, 25, 12, 6);
  TrainConfig config;
  config.num_topics = 3;
  config.alpha = 0.2;
  config.beta = 0.05;
  config.iterations = 20;
  config.burn_in = 5;
  const TrainedChain chain = run_chain(c, config);
  const GibbsState& s = chain.state;
  for (int k = 0; k < 3; ++k) {
    for (int w = 0; w < 12; ++w) {
      EXPECT_NEAR(chain.model.phi(k, w),
                  (s.topic_word_count(k, w) + 0.05) /
                      (s.topic_total[k] + 12 * 0.05),
                  1e-12);
    }
  }
  for (std::size_t d = 0; d < 10; ++d) {
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(chain.model.doc_theta(d, k),
                  (s.doc_topic_count(d, k) + 0.2) / (25 + 3 * 0.2), 1e-12);
    }
  }
}

TEST(TrainLda, RowsAreDistributions) {
  const Corpus c = random_corpus(10, 25, 12, 6);
  for (Estimator e : {Estimator::kFinalState, Estimator::kAverage}) {
    TrainConfig config;
    config.num_topics = 4;
    config.iterations = 40;
    config.burn_in = 10;
    config.estimator = e;
    config.thinning = 5;
    const TopicModel m = train_lda(c, config);
    for (std::size_t k = 0; k < 4; ++k) {
      double sum = 0.0;
      for (double p : m.phi().row(k)) {
        EXPECT_GE(p, 0.0);
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
    for (std::size_t d = 0; d < 10; ++d) {
      const auto row = m.doc_theta.row(d);
      EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
    }
  }
}

TEST(TrainLda, Deterministic) {
  const Corpus c = random_corpus(10, 25, 12, 6);
  TrainConfig config;
  config.num_topics = 3;
  config.iterations = 30;
  config.burn_in = 5;
  const TopicModel a = train_lda(c, config);
  const TopicModel b = train_lda(c, config);
  EXPECT_EQ(a.phi(), b.phi());
  EXPECT_EQ(a.doc_theta, b.doc_theta);
  config.seed = 2;
  EXPECT_NE(train_lda(c, config).phi(), a.phi());
}

TEST(TrainLda, ValidatesConfig) {
  const Corpus c = random_corpus(3, 5, 4, 1);
  TrainConfig config;
  config.iterations = 10;
  config.burn_in = 10;
  EXPECT_THROW(train_lda(c, config), InvalidArgument);
  config.burn_in = 2;
  config.alpha = 0.0;
  EXPECT_THROW(train_lda(c, config), InvalidArgument);
}

TEST(TrainLda, TrainingPerplexityDropsWithMoreTopics) {
  GeneratorSpec spec;
  spec.planted_phi = block_topics(4, 40, 0.05);
  spec.doc_count = 60;
  spec.min_doc_len = spec.max_doc_len = 40;
  const Corpus c = generate_corpus(spec).corpus;
  TrainConfig config;
  config.iterations = 100;
  config.burn_in = 20;
  config.num_topics = 1;
  const TopicModel one = train_lda(c, config);
  config.num_topics = 4;
  const TopicModel four = train_lda(c, config);
  EXPECT_LE(perplexity_with_thetas(four, c.documents, four.doc_theta),
            perplexity_with_thetas(one, c.documents, one.doc_theta));
}

TEST(TrainLda, TopWordsMatchPlantedModalWords) {
  // Block topics whose first block word carries extra mass.
  Matrix phi = block_topics(3, 30, 0.0);
  for (std::size_t k = 0; k < 3; ++k) {
    for (std::size_t w = 0; w < 30; ++w) phi(k, w) *= 0.7;
    phi(k, k * 10) += 0.3;
  }
  GeneratorSpec spec;
  spec.planted_phi = phi;
  spec.doc_count = 150;
  spec.min_doc_len = spec.max_doc_len = 60;
  spec.alpha = 0.1;
  const Corpus c = generate_corpus(spec).corpus;
  TrainConfig config;
  config.num_topics = 3;
  config.alpha = 0.1;
  config.iterations = 200;
  config.burn_in = 50;
  const TopicModel m = train_lda(c, config);
  const TopicAlignment a = align_topics(m.phi(), phi);
  for (int k = 0; k < 3; ++k) {
    const int planted = a.permutation[k];
    EXPECT_EQ(top_words(m, k, 1).front(),
              c.vocabulary.token(planted * 10));
  }
}

TEST(InferTheta, SingleTopic) {
  const TopicModel m = fixed_model(Matrix(1, 3, 1.0 / 3));
  const std::vector<int32_t> tokens = {0, 1, 2};
  EXPECT_EQ(infer_theta(m, tokens, {}), std::vector<double>{1.0});
}

TEST(InferTheta, EmptyDocumentIsUniform) {
  const TopicModel m = fixed_model(Matrix(4, 3, 1.0 / 3));
  EXPECT_EQ(infer_theta(m, {}, {}), std::vector<double>(4, 0.25));
}

TEST(InferTheta, PureDocumentRecoversItsTopic) {
  const Matrix phi = block_topics(4, 40, 0.01);
  const TopicModel m = fixed_model(phi);
  GeneratorSpec spec;
  spec.planted_phi = phi;
  spec.doc_count = 1;
  spec.min_doc_len = spec.max_doc_len = 80;
  spec.fixed_theta = std::vector<double>{0.0, 0.0, 1.0, 0.0};
  const GeneratedCorpus g = generate_corpus(spec);
  const auto theta = infer_theta(m, g.corpus.documents[0].tokens, {});
  EXPECT_GT(theta[2], 0.9);
  EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
}

TEST(Perplexity, UniformPhiGivesVocabularySize) {
  const TopicModel m = fixed_model(Matrix(3, 5, 0.2));
  const Corpus c = random_corpus(4, 12, 5, 9);
  EXPECT_NEAR(perplexity(m, c.documents, {}), 5.0, 1e-9);
}

TEST(Perplexity, CertainWordGivesOne) {
  Matrix phi(1, 2, 0.0);
  phi(0, 1) = 1.0;
  const TopicModel m = fixed_model(phi);
  const Corpus c = make_corpus({{1, 1, 1, 1}}, 2);
  EXPECT_NEAR(perplexity(m, c.documents, {}), 1.0, 1e-12);
}

// phi rows (0.5, 0.3, 0.2) and (0.1, 0.1, 0.8); documents [0, 2] with theta
// (0.6, 0.4) and [1] with theta (0.25, 0.75). Word probabilities 0.34, 0.44
// and 0.15; (0.34 * 0.44 * 0.15)^(-1/3) = 3.5453494577701252.
TEST(Perplexity, HandComputedToyCorpus) {
  Matrix phi(2, 3);
  phi(0, 0) = 0.5;
  phi(0, 1) = 0.3;
  phi(0, 2) = 0.2;
  phi(1, 0) = 0.1;
  phi(1, 1) = 0.1;
  phi(1, 2) = 0.8;
  const TopicModel m = fixed_model(phi);
  const Corpus c = make_corpus({{0, 2}, {1}}, 3);
  Matrix theta(2, 2);
  theta(0, 0) = 0.6;
  theta(0, 1) = 0.4;
  theta(1, 0) = 0.25;
  theta(1, 1) = 0.75;
  EXPECT_NEAR(perplexity_with_thetas(m, c.documents, theta),
              3.5453494577701252, 1e-12);
}

TEST(Perplexity, EmptyDocumentsSkipped) {
  const TopicModel m = fixed_model(Matrix(2, 4, 0.25));
  std::vector<Document> docs = {{"a", {}, {}}, {"b", {0, 1, 2}, {}}};
  EXPECT_NEAR(perplexity(m, docs, {}), 4.0, 1e-9);
  const std::vector<Document> empty = {{"a", {}, {}}};
  EXPECT_THROW(perplexity(m, empty, {}), EmptyCorpus);
}

TEST(TopWords, OrderAndTies) {
  Matrix phi(2, 4, 0.25);
  phi(0, 0) = 0.1;
  phi(0, 1) = 0.1;
  phi(0, 2) = 0.7;
  phi(0, 3) = 0.1;
  const TopicModel m = fixed_model(phi);
  EXPECT_EQ(top_words(m, 0, 2), (std::vector<std::string>{"t2", "t0"}));
  EXPECT_EQ(top_words(m, 1, 3), (std::vector<std::string>{"t0", "t1", "t2"}));
  EXPECT_EQ(top_words(m, 1, 10).size(), 4u);
  EXPECT_THROW(top_words(m, 2, 1), InvalidArgument);
}

TEST(SliceOccurrence, IdenticalSlicesDoNotDiffer) {
  Matrix theta(4, 2);
  theta(0, 0) = theta(2, 0) = 1.0;
  theta(1, 1) = theta(3, 1) = 1.0;
  const std::vector<int> slice = {0, 0, 1, 1};
  const SliceOccurrence s = slice_occurrence(theta, slice, 2, 0.05);
  EXPECT_EQ(s.relative_difference(0, 1, 0), 0.0);
  EXPECT_EQ(s.relative_difference(0, 1, 1), 0.0);
  EXPECT_TRUE(s.differing_topics(0, 1, 0.5).empty());
}

TEST(SliceOccurrence, ExclusiveTopic) {
  Matrix theta(4, 2);
  theta(0, 0) = theta(1, 0) = 1.0;
  theta(2, 1) = theta(3, 1) = 1.0;
  const std::vector<int> slice = {0, 0, 1, 1};
  const SliceOccurrence s = slice_occurrence(theta, slice, 2, 0.05);
  EXPECT_EQ(s.relative_difference(0, 1, 0), 1.0);
  EXPECT_EQ(s.differing_topics(0, 1, 0.5), (std::vector<int>{0, 1}));
}

TEST(SliceOccurrence, EmptySliceThrows) {
  const Matrix theta(2, 2, 0.5);
  const std::vector<int> slice = {0, 0};
  EXPECT_THROW(slice_occurrence(theta, slice, 2, 0.05), EmptySlice);
}

// One planted topic only ever appears in the second slice.
TEST(SliceOccurrence, FlagsSliceExclusivePlantedTopic) {
  const Matrix phi = block_topics(3, 30, 0.01);
  GeneratorSpec spec;
  spec.planted_phi = phi;
  spec.min_doc_len = spec.max_doc_len = 60;
  spec.alpha = 0.5;
  spec.labels = LabelPlan{LabelTopicLayout({"common", "rare"}, 1, 1),
                          {{LabelSet{"common"}, 40}, {LabelSet{"rare"}, 40}}};
  const GeneratedCorpus g = generate_corpus(spec);
  const TopicModel m = fixed_model(phi);
  const Matrix thetas =
      infer_thetas(m, g.corpus.documents, {}, Execution::kSerial);
  std::vector<int> slice;
  for (const auto& labels : g.labels) slice.push_back(labels.contains("rare"));
  const SliceOccurrence s = slice_occurrence(thetas, slice, 2, 0.05);
  const auto flagged = s.differing_topics(0, 1, 0.5);
  EXPECT_NE(std::find(flagged.begin(), flagged.end(), 1), flagged.end());
  EXPECT_EQ(std::find(flagged.begin(), flagged.end(), 2), flagged.end());
}

TEST(TopicModel, RejectsInvalidPhi) {
  Matrix phi(1, 2, 0.4);
  EXPECT_THROW(fixed_model(phi), InvalidArgument);
}

}  // namespace
}  // namespace topicrate
