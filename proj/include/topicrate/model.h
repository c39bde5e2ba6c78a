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

#ifndef TOPICRATE_MODEL_H_
#define TOPICRATE_MODEL_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "topicrate/corpus.h"
#include "topicrate/matrix.h"

namespace topicrate {

inline constexpr std::string_view kBackgroundKey = "background";
inline constexpr std::string_view kAppropriateLabel = "appropriate";

// Half-open range of topic indices.
struct TopicRange {
  int begin = 0;
  int end = 0;

  int size() const { return end - begin; }
  bool contains(int k) const { return k >= begin && k < end; }
  friend bool operator==(const TopicRange&, const TopicRange&) = default;
};

// Partition of the topic indices among labels (n_label contiguous topics
// each, in label order) followed by n_bg background topics.
class LabelTopicLayout {
 public:
  LabelTopicLayout() = default;
  LabelTopicLayout(std::vector<std::string> labels, int topics_per_label,
                   int background_count);

  const std::vector<std::string>& labels() const { return labels_; }
  int topics_per_label() const { return topics_per_label_; }
  int background_count() const { return background_count_; }
  int num_topics() const {
    return topics_per_label_ * static_cast<int>(labels_.size()) +
           background_count_;
  }

  std::optional<int> label_index(std::string_view label) const;
  // Throws UnknownLabel.
  TopicRange topics_of(std::string_view label) const;
  TopicRange topics_of(int label_index) const;
  TopicRange background() const;
  // Owning label of topic k, or "background".
  std::string_view owner(int k) const;

  friend bool operator==(const LabelTopicLayout&,
                         const LabelTopicLayout&) = default;

 private:
  std::vector<std::string> labels_;
  int topics_per_label_ = 0;
  int background_count_ = 0;
};

enum class Estimator { kFinalState, kAverage };

struct TrainConfig {
  int num_topics = 10;
  double alpha = 0.01;
  double beta = 0.01;
  int iterations = 1000;
  int burn_in = 200;
  std::uint64_t seed = 1;
  Estimator estimator = Estimator::kFinalState;
  // Sample spacing for Estimator::kAverage.
  int thinning = 10;
};

struct ModelMetadata {
  std::uint64_t seed = 0;
  int iterations = 0;
  int burn_in = 0;
  Estimator estimator = Estimator::kFinalState;
  int thinning = 0;
  PreprocessConfig preprocess;

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

// Trained topic-word distributions plus hyperparameters. phi is K x V and
// row-stochastic; a word-major copy is kept for the samplers, which read
// one word's weights across all topics.
class TopicModel {
 public:
  TopicModel() = default;
  TopicModel(Matrix phi, double alpha, double beta,
             std::shared_ptr<const Vocabulary> vocabulary);

  std::size_t num_topics() const { return phi_.rows(); }
  std::size_t vocab_size() const { return phi_.cols(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const Matrix& phi() const { return phi_; }
  double phi(std::size_t k, std::size_t w) const { return phi_(k, w); }
  // phi(., w) for every topic.
  std::span<const double> word_weights(std::int32_t w) const {
    return phi_by_word_.row(static_cast<std::size_t>(w));
  }
  const Vocabulary& vocabulary() const { return *vocabulary_; }
  std::shared_ptr<const Vocabulary> vocabulary_ptr() const {
    return vocabulary_;
  }

  std::optional<LabelTopicLayout> layout;
  ModelMetadata metadata;
  // Theta of the training documents, row order matching doc_ids.
  std::vector<std::string> doc_ids;
  Matrix doc_theta;

 private:
  Matrix phi_;
  Matrix phi_by_word_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::shared_ptr<const Vocabulary> vocabulary_;
};

}  // namespace topicrate

#endif  // TOPICRATE_MODEL_H_
