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

#include <numeric>
#include <string>
#include <vector>

#include "test_support.h"
#include "topicrate/annotations.h"
#include "topicrate/errors.h"
#include "topicrate/kernels.h"
#include "topicrate/lda.h"
#include "topicrate/plda.h"
#include "topicrate/synthgen.h"

namespace topicrate {
namespace {

using testing::make_corpus;

Corpus labeled_corpus(const std::vector<std::vector<std::string>>& labels) {
  Rng rng(3);
  std::vector<std::vector<int32_t>> ids(labels.size());
  for (auto& d : ids) {
    for (int i = 0; i < 30; ++i) d.push_back(static_cast<int32_t>(rng.below(20)));
  }
  Corpus c = make_corpus(ids, 20);
  for (std::size_t d = 0; d < labels.size(); ++d) c.documents[d].labels = labels[d];
  return c;
}

TEST(Layout, TopicRanges) {
  const LabelTopicLayout layout = build_layout({"a", "b", "c"}, 2, 3);
  EXPECT_EQ(layout.num_topics(), 9);
  EXPECT_EQ(layout.topics_of("a"), (TopicRange{0, 2}));
  EXPECT_EQ(layout.topics_of("c"), (TopicRange{4, 6}));
  EXPECT_EQ(layout.background(), (TopicRange{6, 9}));
  EXPECT_EQ(layout.owner(3), "b");
  EXPECT_EQ(layout.owner(8), kBackgroundKey);
  EXPECT_FALSE(layout.label_index("z").has_value());
  EXPECT_THROW(layout.topics_of("z"), UnknownLabel);
}

TEST(Layout, StandardLabelsGiveThirtyOneTopics) {
  EXPECT_EQ(build_layout(standard_labels(), 3, 1).num_topics(), 31);
}

TEST(Layout, RejectsDuplicates) {
  EXPECT_THROW(build_layout({"a", "b", "a"}, 1, 0), DuplicateLabel);
}

TEST(AllowedTopics, UnionPlusBackground) {
  const LabelTopicLayout layout = build_layout({"a", "b", "c"}, 2, 1);
  const std::vector<std::string> ca = {"c", "a"};
  EXPECT_EQ(allowed_topics(layout, ca), (std::vector<int32_t>{0, 1, 4, 5, 6}));
  EXPECT_EQ(allowed_topics(layout, {}), (std::vector<int32_t>{6}));
  const std::vector<std::string> unknown = {"x"};
  EXPECT_THROW(allowed_topics(layout, unknown), UnknownLabel);
}

TEST(TopicSupport, NoBackgroundNeedsLabels) {
  const Corpus c = labeled_corpus({{"a"}, {}});
  EXPECT_THROW(topic_support(c, build_layout({"a"}, 2, 0)), InvalidArgument);
  EXPECT_EQ(topic_support(c, build_layout({"a"}, 2, 1)).size(), 2u);
}

TEST(LabelMass, SumsRanges) {
  const LabelTopicLayout layout = build_layout({"a", "b"}, 2, 1);
  const std::vector<double> theta = {0.1, 0.2, 0.3, 0.15, 0.25};
  const auto mass = label_mass(theta, layout);
  EXPECT_NEAR(mass.at("a"), 0.3, 1e-15);
  EXPECT_NEAR(mass.at("b"), 0.45, 1e-15);
  EXPECT_NEAR(mass.at(std::string(kBackgroundKey)), 0.25, 1e-15);
  const std::vector<double> short_theta = {0.5, 0.5};
  EXPECT_THROW(label_mass(short_theta, layout), DimensionMismatch);
}

TEST(LabelMass, BackgroundPresentWithoutBackgroundTopics) {
  const LabelTopicLayout layout = build_layout({"a"}, 2, 0);
  const std::vector<double> theta = {0.5, 0.5};
  EXPECT_EQ(label_mass(theta, layout).at(std::string(kBackgroundKey)), 0.0);
}

TEST(TrainPlda, AssignmentsStayInsideSupport) {
  const Corpus c = labeled_corpus({{"a"}, {"b"}, {"a", "c"}, {}, {"c"}});
  const LabelTopicLayout layout = build_layout({"a", "b", "c"}, 2, 1);
  TrainConfig config;
  config.iterations = 50;
  config.burn_in = 10;
  const TrainedChain chain = run_plda_chain(c, layout, config);
  EXPECT_EQ(chain.model.num_topics(), 7u);
  EXPECT_TRUE(chain.model.layout.has_value());
  for (std::size_t d = 0; d < c.documents.size(); ++d) {
    const auto allowed = allowed_topics(layout, c.documents[d].labels);
    for (int k = 0; k < 7; ++k) {
      const bool in = std::find(allowed.begin(), allowed.end(), k) !=
                      allowed.end();
      if (!in) EXPECT_EQ(chain.state.doc_topic_count(d, k), 0);
    }
  }
  EXPECT_TRUE(chain.state.counts_consistent(c));
}

// Every document carries the single label that owns every topic, so the
// constrained sampler must retrace the unconstrained one draw for draw.
TEST(TrainPlda, FullSupportReducesToLda) {
  const Corpus c = labeled_corpus({{"all"}, {"all"}, {"all"}, {"all"}});
  TrainConfig config;
  config.num_topics = 4;
  config.iterations = 60;
  config.burn_in = 10;
  const TrainedChain lda = run_chain(c, config);
  const TrainedChain plda = run_plda_chain(c, build_layout({"all"}, 4, 0), config);
  EXPECT_EQ(lda.state, plda.state);
  EXPECT_EQ(lda.model.phi(), plda.model.phi());
  EXPECT_EQ(lda.model.doc_theta, plda.model.doc_theta);
}

TEST(TrainPlda, RecoversLabelTopics) {
  const LabelTopicLayout layout = build_layout({"x", "y", "z"}, 1, 1);
  GeneratorSpec spec;
  spec.planted_phi = block_topics(4, 40, 0.0);
  spec.min_doc_len = spec.max_doc_len = 50;
  spec.labels = LabelPlan{layout, {{LabelSet{"x"}, 30},
                                   {LabelSet{"y"}, 30},
                                   {LabelSet{"z"}, 30}}};
  const GeneratedCorpus g = generate_corpus(spec);
  TrainConfig config;
  config.alpha = 0.1;
  config.iterations = 200;
  config.burn_in = 50;
  const TopicModel m = train_plda(g.corpus, layout, config);
  // Identity alignment: label topics are pinned by the constraint.
  const TopicAlignment a = align_topics(m.phi(), spec.planted_phi);
  EXPECT_EQ(a.permutation, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_LT(a.mean_l1, 0.2);
}

// Standard labels, two topics per label and one background topic, each
// planted topic a disjoint block of 20 words.
class StandardLabels : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    layout_ = new LabelTopicLayout(build_layout(standard_labels(), 2, 1));
    plan_ = new LabelPlan{*layout_, {}};
    for (const auto& label : standard_labels()) {
      if (label != "appropriate") plan_->groups.push_back({LabelSet{label}, 30});
    }
    GeneratorSpec spec = generator(1);
    const GeneratedCorpus g = generate_corpus(spec);
    TrainConfig config;
    config.alpha = 0.1;
    config.iterations = 200;
    config.burn_in = 50;
    model_ = new TopicModel(train_plda(g.corpus, *layout_, config));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete plan_;
    delete layout_;
  }

  static GeneratorSpec generator(std::uint64_t seed) {
    GeneratorSpec spec;
    spec.planted_phi = block_topics(layout_->num_topics(),
                                    20 * layout_->num_topics(), 0.0);
    spec.alpha = 1.0;
    spec.min_doc_len = spec.max_doc_len = 50;
    spec.labels = *plan_;
    spec.seed = seed;
    return spec;
  }

  static LabelTopicLayout* layout_;
  static LabelPlan* plan_;
  static TopicModel* model_;
};

LabelTopicLayout* StandardLabels::layout_ = nullptr;
LabelPlan* StandardLabels::plan_ = nullptr;
TopicModel* StandardLabels::model_ = nullptr;

TEST_F(StandardLabels, HeldOutMassRanksTrueLabelFirst) {
  const GeneratedCorpus held = generate_corpus(generator(99));
  const Matrix thetas =
      infer_thetas(*model_, held.corpus.documents, {}, Execution::kSerial);
  int first = 0;
  for (std::size_t d = 0; d < held.labels.size(); ++d) {
    const auto mass = label_mass(thetas.row(d), *layout_);
    std::string best;
    double best_mass = -1.0;
    for (const auto& [label, m] : mass) {
      if (label == kBackgroundKey || label == kAppropriateLabel) continue;
      if (m > best_mass) {
        best_mass = m;
        best = label;
      }
    }
    first += held.labels[d].contains(best);
  }
  EXPECT_GE(first, 0.9 * static_cast<double>(held.labels.size()));
}

TEST_F(StandardLabels, PureDocumentMassPeaksAtItsLabel) {
  GeneratorSpec spec = generator(5);
  spec.labels.reset();
  spec.doc_count = 1;
  std::vector<double> theta(layout_->num_topics(), 0.0);
  const TopicRange r = layout_->topics_of("violence:3");
  for (int k = r.begin; k < r.end; ++k) theta[k] = 1.0 / r.size();
  spec.fixed_theta = theta;
  const GeneratedCorpus g = generate_corpus(spec);
  const auto inferred = infer_theta(*model_, g.corpus.documents[0].tokens, {});
  const auto mass = label_mass(inferred, *layout_);
  for (const auto& [label, m] : mass) {
    if (label == kBackgroundKey || label == "violence:3") continue;
    EXPECT_GT(mass.at("violence:3"), m) << label;
  }
}

}  // namespace
}  // namespace topicrate
