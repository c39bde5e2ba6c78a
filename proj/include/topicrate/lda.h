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

#ifndef TOPICRATE_LDA_H_
#define TOPICRATE_LDA_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topicrate/corpus.h"
#include "topicrate/matrix.h"
#include "topicrate/model.h"
#include "topicrate/rng.h"

namespace topicrate {

// Per-document list of topics a token may take, ascending. An empty
// support pointer means every topic is allowed.
using TopicSupport = std::vector<std::vector<int32_t>>;

// Latent assignments and the count tables of a collapsed Gibbs chain.
struct GibbsState {
  int num_topics = 0;
  int vocab_size = 0;
  std::vector<std::vector<int32_t>> assignments;
  std::vector<int32_t> doc_topic;   // D x K
  std::vector<int32_t> word_topic;  // V x K (word-major)
  std::vector<int64_t> topic_total;  // K
  std::uint64_t seed = 0;
  Rng rng;

  int32_t doc_topic_count(std::size_t d, int k) const {
    return doc_topic[d * num_topics + k];
  }
  int32_t topic_word_count(int k, int32_t w) const {
    return word_topic[static_cast<std::size_t>(w) * num_topics + k];
  }

  // Rebuilds every table from the assignments and compares.
  bool counts_consistent(const Corpus& corpus) const;

  friend bool operator==(const GibbsState&, const GibbsState&) = default;
};

GibbsState init_state(const Corpus& corpus, int num_topics,
                      std::uint64_t seed,
                      const TopicSupport* support = nullptr);

// Resamples every token once, in document then position order, from
//   p(z = k | rest) ∝ (n_dk + alpha)(n_kw + beta) / (n_k + V beta)
// with the current token excluded from the counts. With a support, the
// conditional is renormalized over the document's allowed topics.
void gibbs_sweep(GibbsState& state, const Corpus& corpus, double alpha,
                 double beta, const TopicSupport* support = nullptr);

struct TrainedChain {
  TopicModel model;
  GibbsState state;
};

// init_state followed by config.iterations sweeps; phi and theta are
// estimated from the final state or averaged over post-burn-in samples.
TrainedChain run_chain(const Corpus& corpus, const TrainConfig& config,
                       const TopicSupport* support = nullptr);

TopicModel train_lda(const Corpus& corpus, const TrainConfig& config);

struct InferenceConfig {
  int iterations = 100;
  int burn_in = 50;
  std::uint64_t seed = 1;
};

// Fold-in: samples the document's assignments with phi held fixed,
//   p(z_i = k) ∝ phi(k, w_i) (n_k + alpha),
// and returns the smoothed topic proportions averaged over the sweeps after
// burn-in. A document without tokens gets the uniform vector.
std::vector<double> infer_theta(const TopicModel& model,
                                std::span<const int32_t> tokens,
                                const InferenceConfig& config);

// exp(-sum log p(w) / N) over the held-out documents, theta from fold-in.
// Documents without in-vocabulary tokens are skipped; throws EmptyCorpus
// when none remain.
double perplexity(const TopicModel& model, std::span<const Document> heldout,
                  const InferenceConfig& config);

// Same formula with caller-supplied theta rows (e.g. the training thetas).
double perplexity_with_thetas(const TopicModel& model,
                              std::span<const Document> documents,
                              const Matrix& thetas);

// The n highest-probability tokens of a topic, ties by ascending id.
std::vector<std::string> top_words(const TopicModel& model, int topic,
                                   std::size_t n);

struct SliceOccurrence {
  // occurrence(s, k): fraction of slice-s documents with theta_k >= threshold.
  Matrix occurrence;

  // |occ_a - occ_b| / max(occ_a, occ_b), zero when both are zero.
  double relative_difference(std::size_t a, std::size_t b, int k) const;
  // Topics whose relative difference between slices a and b exceeds cutoff.
  std::vector<int> differing_topics(std::size_t a, std::size_t b,
                                    double cutoff) const;
};

// slice_of[d] in [0, num_slices) for every theta row. Throws EmptySlice.
SliceOccurrence slice_occurrence(const Matrix& thetas,
                                 std::span<const int> slice_of,
                                 std::size_t num_slices,
                                 double topic_threshold);

}  // namespace topicrate

#endif  // TOPICRATE_LDA_H_
