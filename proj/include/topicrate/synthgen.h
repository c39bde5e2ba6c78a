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

#ifndef TOPICRATE_SYNTHGEN_H_
#define TOPICRATE_SYNTHGEN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "topicrate/annotations.h"
#include "topicrate/corpus.h"
#include "topicrate/matrix.h"
#include "topicrate/model.h"

namespace topicrate {

// Documents are generated group by group; every document of a group carries
// the group's labels and draws theta only over those labels' topics plus
// the background topics.
struct LabelPlan {
  LabelTopicLayout layout;
  std::vector<std::pair<LabelSet, int>> groups;  // label set, document count
};

struct GeneratorSpec {
  Matrix planted_phi;  // K x V, row-stochastic
  double alpha = 0.1;
  int doc_count = 100;  // ignored when a label plan is set
  int min_doc_len = 100;
  int max_doc_len = 100;  // inclusive; equal to min for fixed length
  std::optional<LabelPlan> labels;
  // Every document uses this theta instead of a Dirichlet draw.
  std::optional<std::vector<double>> fixed_theta;
  std::uint64_t seed = 1;
  std::string id_prefix = "doc";
};

struct GeneratedCorpus {
  // Token ids equal planted word indices; vocabulary tokens are "w0000"...
  Corpus corpus;
  Matrix theta;
  std::vector<LabelSet> labels;
};

GeneratedCorpus generate_corpus(const GeneratorSpec& spec);

// K near-orthogonal topics over V words: topic k puts (1 - leak) of its
// mass uniformly on its own block of V/K words and spreads the remaining
// leak uniformly over the whole vocabulary.
Matrix block_topics(int num_topics, int vocab_size, double leak);

struct TopicAlignment {
  // permutation[i] is the planted row matched to estimated row i.
  std::vector<int> permutation;
  double mean_l1 = 0.0;
};

// Greedy matching: repeatedly pairs the globally closest unused
// (estimated, planted) rows by L1 distance.
TopicAlignment align_topics(const Matrix& estimated, const Matrix& planted);

// Renders the corpus as raw documents: tokens joined by spaces with the
// filler word "the" inserted after every `filler_every` tokens (0 for
// none) so the text passes the English heuristic, labels copied, and
// unanimous ratings derived from category:level labels.
std::vector<RawDocument> to_raw_documents(const GeneratedCorpus& generated,
                                          int filler_every = 4);

// Planted truth sidecar: phi, per-document theta and labels.
nlohmann::ordered_json truth_json(const GeneratedCorpus& generated,
                                  const Matrix& planted_phi);

}  // namespace topicrate

#endif  // TOPICRATE_SYNTHGEN_H_
