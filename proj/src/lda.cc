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

#include "topicrate/lda.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topicrate/errors.h"
#include "topicrate/kernels.h"

namespace topicrate {
namespace {

std::vector<int32_t> all_topics(int k) {
  std::vector<int32_t> topics(static_cast<std::size_t>(k));
  std::iota(topics.begin(), topics.end(), 0);
  return topics;
}

void check_support(const Corpus& corpus, int num_topics,
                   const TopicSupport* support) {
  if (!support) return;
  if (support->size() != corpus.documents.size()) {
    throw DimensionMismatch("topic support does not cover every document");
  }
  for (const auto& allowed : *support) {
    if (allowed.empty()) throw InvalidArgument("document with no allowed topic");
    for (int32_t k : allowed) {
      if (k < 0 || k >= num_topics) {
        throw InvalidArgument("allowed topic out of range");
      }
    }
  }
}

// Draws an index j with probability cumulative[j] - cumulative[j-1].
std::size_t draw(std::span<const double> cumulative, Rng& rng) {
  const double u = rng.uniform() * cumulative.back();
  std::size_t j = 0;
  const std::size_t last = cumulative.size() - 1;
  while (j < last && cumulative[j] <= u) ++j;
  return j;
}

Matrix estimate_phi(const GibbsState& s, double beta) {
  const std::size_t k_count = static_cast<std::size_t>(s.num_topics);
  const std::size_t v_count = static_cast<std::size_t>(s.vocab_size);
  const double vbeta = static_cast<double>(v_count) * beta;
  Matrix phi(k_count, v_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double denom = static_cast<double>(s.topic_total[k]) + vbeta;
    for (std::size_t w = 0; w < v_count; ++w) {
      phi(k, w) = (s.word_topic[w * k_count + k] + beta) / denom;
    }
  }
  return phi;
}

// Smoothed document-topic proportions; with a support, mass is spread only
// over the document's allowed topics.
Matrix estimate_theta(const GibbsState& s, double alpha,
                      const TopicSupport* support) {
  const std::size_t k_count = static_cast<std::size_t>(s.num_topics);
  Matrix theta(s.assignments.size(), k_count);
  const std::vector<int32_t> every = all_topics(s.num_topics);
  for (std::size_t d = 0; d < s.assignments.size(); ++d) {
    const auto& allowed = support ? (*support)[d] : every;
    const double denom = static_cast<double>(s.assignments[d].size()) +
                         static_cast<double>(allowed.size()) * alpha;
    for (int32_t k : allowed) {
      theta(d, k) = (s.doc_topic[d * k_count + k] + alpha) / denom;
    }
  }
  return theta;
}

void accumulate(Matrix& into, const Matrix& sample) {
  auto& a = into.data();
  const auto& b = sample.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

void scale(Matrix& m, double factor) {
  for (double& x : m.data()) x *= factor;
}

}  // namespace

bool GibbsState::counts_consistent(const Corpus& corpus) const {
  const std::size_t k_count = static_cast<std::size_t>(num_topics);
  if (assignments.size() != corpus.documents.size()) return false;
  std::vector<int32_t> dt(assignments.size() * k_count, 0);
  std::vector<int32_t> wt(static_cast<std::size_t>(vocab_size) * k_count, 0);
  std::vector<int64_t> tt(k_count, 0);
  for (std::size_t d = 0; d < assignments.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    if (tokens.size() != assignments[d].size()) return false;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const int32_t k = assignments[d][i];
      if (k < 0 || k >= num_topics) return false;
      ++dt[d * k_count + k];
      ++wt[static_cast<std::size_t>(tokens[i]) * k_count + k];
      ++tt[k];
    }
  }
  return dt == doc_topic && wt == word_topic && tt == topic_total;
}

GibbsState init_state(const Corpus& corpus, int num_topics,
                      std::uint64_t seed, const TopicSupport* support) {
  if (num_topics < 1) throw InvalidArgument("number of topics must be >= 1");
  if (corpus.documents.empty()) throw EmptyCorpus("corpus has no documents");
  check_support(corpus, num_topics, support);

  GibbsState s;
  s.num_topics = num_topics;
  s.vocab_size = static_cast<int>(corpus.vocabulary.size());
  s.seed = seed;
  s.rng = Rng(seed);
  const std::size_t k_count = static_cast<std::size_t>(num_topics);
  s.doc_topic.assign(corpus.documents.size() * k_count, 0);
  s.word_topic.assign(corpus.vocabulary.size() * k_count, 0);
  s.topic_total.assign(k_count, 0);
  s.assignments.resize(corpus.documents.size());

  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    auto& z = s.assignments[d];
    z.resize(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      int32_t k;
      if (support) {
        const auto& allowed = (*support)[d];
        k = allowed[s.rng.below(static_cast<std::uint32_t>(allowed.size()))];
      } else {
        k = static_cast<int32_t>(s.rng.below(static_cast<std::uint32_t>(num_topics)));
      }
      z[i] = k;
      ++s.doc_topic[d * k_count + k];
      ++s.word_topic[static_cast<std::size_t>(tokens[i]) * k_count + k];
      ++s.topic_total[k];
    }
  }
  return s;
}

void gibbs_sweep(GibbsState& s, const Corpus& corpus, double alpha,
                 double beta, const TopicSupport* support) {
  const std::size_t k_count = static_cast<std::size_t>(s.num_topics);
  const double vbeta = static_cast<double>(s.vocab_size) * beta;
  const std::vector<int32_t> every = support ? std::vector<int32_t>{}
                                             : all_topics(s.num_topics);
  std::vector<double> cumulative(k_count);

  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& tokens = corpus.documents[d].tokens;
    const auto& allowed = support ? (*support)[d] : every;
    const std::span<double> cum(cumulative.data(), allowed.size());
    int32_t* dt = s.doc_topic.data() + d * k_count;
    auto& z = s.assignments[d];
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      int32_t* wt = s.word_topic.data() +
                    static_cast<std::size_t>(tokens[i]) * k_count;
      int32_t k = z[i];
      --dt[k];
      --wt[k];
      --s.topic_total[k];

      double total = 0.0;
      for (std::size_t j = 0; j < allowed.size(); ++j) {
        const int32_t t = allowed[j];
        total += (dt[t] + alpha) * (wt[t] + beta) /
                 (static_cast<double>(s.topic_total[t]) + vbeta);
        cum[j] = total;
      }
      k = allowed[draw(cum, s.rng)];

      z[i] = k;
      ++dt[k];
      ++wt[k];
      ++s.topic_total[k];
    }
  }
}

TrainedChain run_chain(const Corpus& corpus, const TrainConfig& config,
                       const TopicSupport* support) {
  if (!(config.alpha > 0.0) || !(config.beta > 0.0)) {
    throw InvalidArgument("alpha and beta must be positive");
  }
  if (config.burn_in < 0 || config.iterations <= config.burn_in) {
    throw InvalidArgument("require iterations > burn_in >= 0");
  }
  if (config.estimator == Estimator::kAverage && config.thinning < 1) {
    throw InvalidArgument("thinning must be >= 1");
  }
  if (corpus.documents.empty() || corpus.token_count() == 0) {
    throw EmptyCorpus("cannot train on an empty corpus");
  }

  GibbsState state = init_state(corpus, config.num_topics, config.seed, support);
  Matrix phi_sum, theta_sum;
  int samples = 0;
  for (int it = 0; it < config.iterations; ++it) {
    gibbs_sweep(state, corpus, config.alpha, config.beta, support);
    if (config.estimator == Estimator::kAverage && it >= config.burn_in &&
        (it - config.burn_in) % config.thinning == 0) {
      if (samples == 0) {
        phi_sum = estimate_phi(state, config.beta);
        theta_sum = estimate_theta(state, config.alpha, support);
      } else {
        accumulate(phi_sum, estimate_phi(state, config.beta));
        accumulate(theta_sum, estimate_theta(state, config.alpha, support));
      }
      ++samples;
    }
  }

  Matrix phi, theta;
  if (samples > 0) {
    scale(phi_sum, 1.0 / samples);
    scale(theta_sum, 1.0 / samples);
    phi = std::move(phi_sum);
    theta = std::move(theta_sum);
  } else {
    phi = estimate_phi(state, config.beta);
    theta = estimate_theta(state, config.alpha, support);
  }

  TopicModel model(std::move(phi), config.alpha, config.beta,
                   std::make_shared<const Vocabulary>(corpus.vocabulary));
  model.metadata.seed = config.seed;
  model.metadata.iterations = config.iterations;
  model.metadata.burn_in = config.burn_in;
  model.metadata.estimator = config.estimator;
  model.metadata.thinning =
      config.estimator == Estimator::kAverage ? config.thinning : 0;
  model.metadata.preprocess = corpus.config;
  model.doc_ids = corpus.document_ids();
  model.doc_theta = std::move(theta);
  return {std::move(model), std::move(state)};
}

TopicModel train_lda(const Corpus& corpus, const TrainConfig& config) {
  return run_chain(corpus, config).model;
}

std::vector<double> infer_theta(const TopicModel& model,
                                std::span<const int32_t> tokens,
                                const InferenceConfig& config) {
  const std::size_t k_count = model.num_topics();
  if (config.burn_in < 0 || config.iterations <= config.burn_in) {
    throw InvalidArgument("require iterations > burn_in >= 0 for inference");
  }
  if (tokens.empty()) {
    return std::vector<double>(k_count, 1.0 / static_cast<double>(k_count));
  }
  for (int32_t w : tokens) {
    if (w < 0 || static_cast<std::size_t>(w) >= model.vocab_size()) {
      throw DimensionMismatch("token id outside the model vocabulary");
    }
  }

  const double alpha = model.alpha();
  Rng rng(config.seed);
  std::vector<int32_t> z(tokens.size());
  std::vector<int32_t> counts(k_count, 0);
  for (auto& k : z) {
    k = static_cast<int32_t>(rng.below(static_cast<std::uint32_t>(k_count)));
    ++counts[k];
  }

  std::vector<double> cumulative(k_count);
  std::vector<double> accum(k_count, 0.0);
  int samples = 0;
  for (int it = 0; it < config.iterations; ++it) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      --counts[z[i]];
      const auto weights = model.word_weights(tokens[i]);
      double total = 0.0;
      for (std::size_t k = 0; k < k_count; ++k) {
        total += weights[k] * (counts[k] + alpha);
        cumulative[k] = total;
      }
      const auto k = static_cast<int32_t>(draw(cumulative, rng));
      z[i] = k;
      ++counts[k];
    }
    if (it >= config.burn_in) {
      for (std::size_t k = 0; k < k_count; ++k) accum[k] += counts[k];
      ++samples;
    }
  }

  std::vector<double> theta(k_count);
  double sum = 0.0;
  for (std::size_t k = 0; k < k_count; ++k) {
    theta[k] = accum[k] / samples + alpha;
    sum += theta[k];
  }
  for (double& t : theta) t /= sum;
  return theta;
}

double perplexity_with_thetas(const TopicModel& model,
                              std::span<const Document> documents,
                              const Matrix& thetas) {
  const std::vector<double> ll =
      log_likelihoods(model, documents, thetas, Execution::kParallel);
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    total += ll[d];
    n += documents[d].tokens.size();
  }
  if (n == 0) throw EmptyCorpus("no in-vocabulary tokens to evaluate");
  return std::exp(-total / static_cast<double>(n));
}

double perplexity(const TopicModel& model, std::span<const Document> heldout,
                  const InferenceConfig& config) {
  std::vector<Document> usable;
  for (const auto& d : heldout) {
    if (!d.tokens.empty()) usable.push_back(d);
  }
  if (usable.empty()) {
    throw EmptyCorpus("no held-out document has in-vocabulary tokens");
  }
  const Matrix thetas =
      infer_thetas(model, usable, config, Execution::kParallel);
  return perplexity_with_thetas(model, usable, thetas);
}

std::vector<std::string> top_words(const TopicModel& model, int topic,
                                   std::size_t n) {
  if (topic < 0 || static_cast<std::size_t>(topic) >= model.num_topics()) {
    throw InvalidArgument("topic index out of range");
  }
  if (n < 1) throw InvalidArgument("n must be >= 1");
  const auto row = model.phi().row(static_cast<std::size_t>(topic));
  std::vector<int32_t> ids(row.size());
  std::iota(ids.begin(), ids.end(), 0);
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n),
                    ids.end(), [&](int32_t a, int32_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return a < b;
                    });
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    words.push_back(model.vocabulary().token(ids[i]));
  }
  return words;
}

double SliceOccurrence::relative_difference(std::size_t a, std::size_t b,
                                            int k) const {
  const double x = occurrence(a, static_cast<std::size_t>(k));
  const double y = occurrence(b, static_cast<std::size_t>(k));
  const double hi = std::max(x, y);
  return hi == 0.0 ? 0.0 : std::abs(x - y) / hi;
}

std::vector<int> SliceOccurrence::differing_topics(std::size_t a,
                                                   std::size_t b,
                                                   double cutoff) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < occurrence.cols(); ++k) {
    if (relative_difference(a, b, static_cast<int>(k)) > cutoff) {
      out.push_back(static_cast<int>(k));
    }
  }
  return out;
}

SliceOccurrence slice_occurrence(const Matrix& thetas,
                                 std::span<const int> slice_of,
                                 std::size_t num_slices,
                                 double topic_threshold) {
  if (slice_of.size() != thetas.rows()) {
    throw DimensionMismatch("slice assignment does not cover every document");
  }
  std::vector<std::size_t> sizes(num_slices, 0);
  SliceOccurrence result{Matrix(num_slices, thetas.cols())};
  for (std::size_t d = 0; d < thetas.rows(); ++d) {
    const int s = slice_of[d];
    if (s < 0 || static_cast<std::size_t>(s) >= num_slices) {
      throw InvalidArgument("slice index out of range");
    }
    ++sizes[s];
    for (std::size_t k = 0; k < thetas.cols(); ++k) {
      if (thetas(d, k) >= topic_threshold) result.occurrence(s, k) += 1.0;
    }
  }
  for (std::size_t s = 0; s < num_slices; ++s) {
    if (sizes[s] == 0) {
      throw EmptySlice("slice " + std::to_string(s) + " has no documents");
    }
    for (double& x : result.occurrence.row(s)) {
      x /= static_cast<double>(sizes[s]);
    }
  }
  return result;
}

}  // namespace topicrate
