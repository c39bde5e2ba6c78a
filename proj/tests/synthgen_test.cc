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
#include <numeric>
#include <vector>

#include "topicrate/annotations.h"
#include "topicrate/errors.h"
#include "topicrate/plda.h"
#include "topicrate/rng.h"
#include "topicrate/synthgen.h"

namespace topicrate {
namespace {

TEST(BlockTopics, RowsAndSupport) {
  const Matrix phi = block_topics(4, 20, 0.1);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto row = phi.row(k);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
    EXPECT_NEAR(phi(k, 5 * k), 0.9 / 5 + 0.1 / 20, 1e-15);
    EXPECT_NEAR(phi(k, (5 * k + 7) % 20), 0.1 / 20, 1e-15);
  }
  EXPECT_THROW(block_topics(5, 4, 0.0), InvalidArgument);
  EXPECT_THROW(block_topics(2, 4, 1.0), InvalidArgument);
}

TEST(Generate, FixedMixtureMatchesUnigram) {
  Matrix phi(2, 50);
  double norm0 = 0.0, norm1 = 0.0;
  for (int w = 0; w < 50; ++w) {
    norm0 += phi(0, w) = 1.0 + w % 7;
    norm1 += phi(1, w) = 1.0 + (w * w) % 11;
  }
  for (int w = 0; w < 50; ++w) {
    phi(0, w) /= norm0;
    phi(1, w) /= norm1;
  }
  GeneratorSpec spec;
  spec.planted_phi = phi;
  spec.doc_count = 1000;
  spec.min_doc_len = spec.max_doc_len = 1000;
  spec.fixed_theta = std::vector<double>{0.3, 0.7};
  const GeneratedCorpus g = generate_corpus(spec);
  std::vector<double> freq(50, 0.0);
  for (const auto& d : g.corpus.documents) {
    for (int32_t w : d.tokens) freq[w] += 1e-6;
  }
  double l1 = 0.0;
  for (int w = 0; w < 50; ++w) {
    l1 += std::abs(freq[w] - (0.3 * phi(0, w) + 0.7 * phi(1, w)));
  }
  // Expected L1 under sampling noise is about 0.005.
  EXPECT_LT(l1, 0.01);
}

TEST(Generate, LengthsAndThetas) {
  GeneratorSpec spec;
  spec.planted_phi = block_topics(3, 30, 0.0);
  spec.doc_count = 40;
  spec.min_doc_len = 5;
  spec.max_doc_len = 9;
  const GeneratedCorpus g = generate_corpus(spec);
  ASSERT_EQ(g.corpus.documents.size(), 40u);
  ASSERT_EQ(g.theta.rows(), 40u);
  for (std::size_t d = 0; d < 40; ++d) {
    const auto n = g.corpus.documents[d].tokens.size();
    EXPECT_GE(n, 5u);
    EXPECT_LE(n, 9u);
    const auto row = g.theta.row(d);
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-12);
  }
  EXPECT_EQ(g.corpus.vocabulary.size(), 30u);
  EXPECT_EQ(g.corpus.vocabulary.token(7), "w0007");
}

TEST(Generate, Deterministic) {
  GeneratorSpec spec;
  spec.planted_phi = block_topics(3, 30, 0.1);
  spec.doc_count = 10;
  EXPECT_EQ(generate_corpus(spec).corpus, generate_corpus(spec).corpus);
  GeneratorSpec other = spec;
  other.seed = 2;
  EXPECT_NE(generate_corpus(other).corpus, generate_corpus(spec).corpus);
}

TEST(Generate, LabelPlanRestrictsTopics) {
  const LabelTopicLayout layout = build_layout({"a", "b"}, 2, 1);
  GeneratorSpec spec;
  spec.planted_phi = block_topics(5, 50, 0.0);
  spec.min_doc_len = spec.max_doc_len = 30;
  spec.labels = LabelPlan{layout, {{LabelSet{"a"}, 5}, {LabelSet{"a", "b"}, 3}}};
  const GeneratedCorpus g = generate_corpus(spec);
  ASSERT_EQ(g.corpus.documents.size(), 8u);
  for (std::size_t d = 0; d < 8; ++d) {
    EXPECT_EQ(g.labels[d], (d < 5 ? LabelSet{"a"} : LabelSet{"a", "b"}));
    const std::vector<std::string> labels(g.labels[d].begin(), g.labels[d].end());
    EXPECT_EQ(g.corpus.documents[d].labels, labels);
    const auto allowed = allowed_topics(layout, labels);
    for (int k = 0; k < 5; ++k) {
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
        EXPECT_EQ(g.theta(d, k), 0.0);
      }
    }
  }
}

TEST(Generate, FixedTheta) {
  GeneratorSpec spec;
  spec.planted_phi = block_topics(2, 10, 0.0);
  spec.doc_count = 3;
  spec.min_doc_len = spec.max_doc_len = 20;
  spec.fixed_theta = std::vector<double>{1.0, 0.0};
  const GeneratedCorpus g = generate_corpus(spec);
  for (const auto& d : g.corpus.documents) {
    for (int32_t w : d.tokens) EXPECT_LT(w, 5);
  }
}

TEST(Align, IdentityAndPermutation) {
  const Matrix phi = block_topics(4, 40, 0.05);
  const TopicAlignment same = align_topics(phi, phi);
  EXPECT_EQ(same.permutation, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(same.mean_l1, 0.0);
  Matrix shuffled(4, 40);
  const std::vector<int> order = {2, 0, 3, 1};
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t w = 0; w < 40; ++w) shuffled(k, w) = phi(order[k], w);
  }
  const TopicAlignment a = align_topics(shuffled, phi);
  EXPECT_EQ(a.permutation, order);
  EXPECT_EQ(a.mean_l1, 0.0);
  EXPECT_THROW(align_topics(Matrix(3, 40), phi), DimensionMismatch);
}

TEST(Align, MeanL1OfDisjointBlocks) {
  // Any pairing of distinct blocks costs 2 per row.
  const Matrix phi = block_topics(2, 10, 0.0);
  Matrix other(2, 10, 0.0);
  other(0, 0) = other(1, 5) = 1.0;
  const TopicAlignment a = align_topics(other, phi);
  EXPECT_EQ(a.permutation, (std::vector<int>{0, 1}));
  EXPECT_NEAR(a.mean_l1, 1.6, 1e-12);
}

TEST(RawDocuments, FillerAndRatings) {
  const LabelTopicLayout layout = build_layout({"sex:3"}, 1, 1);
  GeneratorSpec spec;
  spec.planted_phi = block_topics(2, 10, 0.0);
  spec.min_doc_len = spec.max_doc_len = 8;
  spec.labels = LabelPlan{layout, {{LabelSet{"sex:3"}, 1}}};
  const GeneratedCorpus g = generate_corpus(spec);
  const auto raw = to_raw_documents(g);
  ASSERT_EQ(raw.size(), 1u);
  const auto tokens = tokenize(raw[0].text);
  EXPECT_EQ(tokens.size(), 10u);
  EXPECT_EQ(std::count(tokens.begin(), tokens.end(), "the"), 2);
  EXPECT_EQ(raw[0].ratings.at("sex"), (std::array<int, 3>{3, 3, 3}));
  EXPECT_EQ(raw[0].labels, (std::vector<std::string>{"sex:3"}));
}

TEST(TruthJson, Shape) {
  GeneratorSpec spec;
  spec.planted_phi = block_topics(2, 6, 0.0);
  spec.doc_count = 2;
  spec.min_doc_len = spec.max_doc_len = 4;
  const GeneratedCorpus g = generate_corpus(spec);
  const auto j = truth_json(g, spec.planted_phi);
  EXPECT_EQ(j["k"], 2);
  EXPECT_EQ(j["v"], 6);
  EXPECT_EQ(j["phi"].size(), 12u);
  EXPECT_EQ(j["docs"].size(), 2u);
  EXPECT_EQ(j["docs"][1]["theta"].size(), 2u);
}

TEST(Align, NoisyCopyStaysWithinTwiceTheNoise) {
  const Matrix phi = block_topics(6, 60, 0.1);
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double noise = 0.002;
    Matrix noisy(6, 60);
    double bound = 0.0;
    const std::vector<int> order = {3, 5, 0, 1, 4, 2};
    for (std::size_t k = 0; k < 6; ++k) {
      double norm = 0.0;
      for (std::size_t w = 0; w < 60; ++w) {
        norm += noisy(k, w) = phi(order[k], w) + noise * rng.uniform();
      }
      double l1 = 0.0;
      for (std::size_t w = 0; w < 60; ++w) {
        noisy(k, w) /= norm;
        l1 += std::abs(noisy(k, w) - phi(order[k], w));
      }
      bound = std::max(bound, l1);
    }
    const TopicAlignment a = align_topics(noisy, phi);
    EXPECT_EQ(a.permutation, order);
    EXPECT_LT(a.mean_l1, 2 * bound);
  }
}

}  // namespace
}  // namespace topicrate
