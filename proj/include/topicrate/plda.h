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

#ifndef TOPICRATE_PLDA_H_
#define TOPICRATE_PLDA_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "topicrate/corpus.h"
#include "topicrate/lda.h"
#include "topicrate/model.h"

namespace topicrate {

// K = n_label * |labels| + n_bg; label i owns [i*n_label, (i+1)*n_label),
// background owns the last n_bg indices. Throws DuplicateLabel.
LabelTopicLayout build_layout(std::vector<std::string> labels, int n_label,
                              int n_bg);

// Sorted union of the labels' topic ranges plus every background topic.
// Throws UnknownLabel for a label missing from the layout.
std::vector<int32_t> allowed_topics(const LabelTopicLayout& layout,
                                    std::span<const std::string> labels);

TopicSupport topic_support(const Corpus& corpus,
                           const LabelTopicLayout& layout);

// LDA restricted per document to allowed_topics(document labels). The
// config's num_topics is ignored in favour of the layout's K.
TrainedChain run_plda_chain(const Corpus& corpus,
                            const LabelTopicLayout& layout,
                            const TrainConfig& config);

TopicModel train_plda(const Corpus& corpus, const LabelTopicLayout& layout,
                      const TrainConfig& config);

// Theta summed over each label's topic range; background mass goes under
// kBackgroundKey (present even when n_bg is zero). Throws DimensionMismatch.
std::map<std::string, double> label_mass(std::span<const double> theta,
                                         const LabelTopicLayout& layout);

}  // namespace topicrate

#endif  // TOPICRATE_PLDA_H_
