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

#include "topicrate/model.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "topicrate/errors.h"

namespace topicrate {

LabelTopicLayout::LabelTopicLayout(std::vector<std::string> labels,
                                   int topics_per_label, int background_count)
    : labels_(std::move(labels)),
      topics_per_label_(topics_per_label),
      background_count_(background_count) {
  if (labels_.empty()) throw InvalidArgument("layout needs at least one label");
  if (topics_per_label_ < 1) throw InvalidArgument("n_label must be >= 1");
  if (background_count_ < 0) throw InvalidArgument("n_bg must be >= 0");
  std::set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (l == kBackgroundKey) {
      throw InvalidArgument("\"background\" is reserved and cannot be a label");
    }
    if (!seen.insert(l).second) throw DuplicateLabel("duplicate label: " + l);
  }
}

std::optional<int> LabelTopicLayout::label_index(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

TopicRange LabelTopicLayout::topics_of(std::string_view label) const {
  auto index = label_index(label);
  if (!index) throw UnknownLabel("label not in layout: " + std::string(label));
  return topics_of(*index);
}

TopicRange LabelTopicLayout::topics_of(int label_index) const {
  return {label_index * topics_per_label_,
          (label_index + 1) * topics_per_label_};
}

TopicRange LabelTopicLayout::background() const {
  const int k = num_topics();
  return {k - background_count_, k};
}

std::string_view LabelTopicLayout::owner(int k) const {
  if (background().contains(k)) return kBackgroundKey;
  return labels_.at(static_cast<std::size_t>(k / topics_per_label_));
}

TopicModel::TopicModel(Matrix phi, double alpha, double beta,
                       std::shared_ptr<const Vocabulary> vocabulary)
    : phi_(std::move(phi)),
      alpha_(alpha),
      beta_(beta),
      vocabulary_(std::move(vocabulary)) {
  if (phi_.rows() < 1) throw InvalidArgument("topic model needs K >= 1");
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) {
    throw InvalidArgument("alpha and beta must be positive");
  }
  if (!vocabulary_ || vocabulary_->size() != phi_.cols()) {
    throw DimensionMismatch("phi columns do not match the vocabulary size");
  }
  for (std::size_t k = 0; k < phi_.rows(); ++k) {
    double sum = 0.0;
    for (double p : phi_.row(k)) {
      if (!(p >= 0.0)) throw InvalidArgument("phi has a negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("phi row " + std::to_string(k) +
                            " does not sum to 1");
    }
  }
  phi_by_word_ = phi_.transposed();
}

}  // namespace topicrate
