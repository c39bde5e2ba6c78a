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

#include "topicrate/plda.h"

#include <algorithm>

#include "topicrate/errors.h"

namespace topicrate {

LabelTopicLayout build_layout(std::vector<std::string> labels, int n_label,
                              int n_bg) {
  return LabelTopicLayout(std::move(labels), n_label, n_bg);
}

std::vector<int32_t> allowed_topics(const LabelTopicLayout& layout,
                                    std::span<const std::string> labels) {
  std::vector<char> on(static_cast<std::size_t>(layout.num_topics()), 0);
  for (const auto& label : labels) {
    const TopicRange r = layout.topics_of(label);
    std::fill(on.begin() + r.begin, on.begin() + r.end, 1);
  }
  const TopicRange bg = layout.background();
  std::fill(on.begin() + bg.begin, on.begin() + bg.end, 1);
  std::vector<int32_t> topics;
  for (std::size_t k = 0; k < on.size(); ++k) {
    if (on[k]) topics.push_back(static_cast<int32_t>(k));
  }
  return topics;
}

TopicSupport topic_support(const Corpus& corpus,
                           const LabelTopicLayout& layout) {
  TopicSupport support;
  support.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    support.push_back(allowed_topics(layout, doc.labels));
    if (support.back().empty()) {
      throw InvalidArgument("document " + doc.id +
                            " has no labels and the layout has no background"
                            " topics");
    }
  }
  return support;
}

TrainedChain run_plda_chain(const Corpus& corpus,
                            const LabelTopicLayout& layout,
                            const TrainConfig& config) {
  const TopicSupport support = topic_support(corpus, layout);
  TrainConfig c = config;
  c.num_topics = layout.num_topics();
  TrainedChain chain = run_chain(corpus, c, &support);
  chain.model.layout = layout;
  return chain;
}

TopicModel train_plda(const Corpus& corpus, const LabelTopicLayout& layout,
                      const TrainConfig& config) {
  return run_plda_chain(corpus, layout, config).model;
}

std::map<std::string, double> label_mass(std::span<const double> theta,
                                         const LabelTopicLayout& layout) {
  if (theta.size() != static_cast<std::size_t>(layout.num_topics())) {
    throw DimensionMismatch("theta length does not match the layout");
  }
  auto sum = [&](TopicRange r) {
    double s = 0.0;
    for (int k = r.begin; k < r.end; ++k) s += theta[k];
    return s;
  };
  std::map<std::string, double> mass;
  for (std::size_t i = 0; i < layout.labels().size(); ++i) {
    mass[layout.labels()[i]] = sum(layout.topics_of(static_cast<int>(i)));
  }
  mass[std::string(kBackgroundKey)] = sum(layout.background());
  return mass;
}

}  // namespace topicrate
