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

#include "topicrate/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "topicrate/errors.h"
#include "topicrate/kernels.h"
#include "topicrate/rng.h"

namespace topicrate {
namespace {

std::vector<double> cumulative(std::span<const double> p) {
  std::vector<double> c(p.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    total += p[i];
    c[i] = total;
  }
  return c;
}

std::size_t sample(const std::vector<double>& cum, Rng& rng) {
  const double u = rng.uniform() * cum.back();
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  if (it == cum.end()) --it;
  return static_cast<std::size_t>(it - cum.begin());
}

std::string word_name(std::size_t w, std::size_t vocab_size) {
  int width = 4;
  for (std::size_t v = vocab_size; v >= 10000; v /= 10) ++width;
  std::string digits = std::to_string(w);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return "w" + digits;
}

void check_spec(const GeneratorSpec& spec) {
  const Matrix& phi = spec.planted_phi;
  if (phi.rows() < 1 || phi.cols() < 1) {
    throw InvalidArgument("planted phi must be non-empty");
  }
  for (std::size_t k = 0; k < phi.rows(); ++k) {
    double sum = 0.0;
    for (double p : phi.row(k)) {
      if (!(p >= 0.0)) throw InvalidArgument("planted phi has negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw InvalidArgument("planted phi rows must sum to 1");
    }
  }
  if (!(spec.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
  if (spec.min_doc_len < 1 || spec.max_doc_len < spec.min_doc_len) {
    throw InvalidArgument("invalid document length range");
  }
  if (!spec.labels && spec.doc_count < 1) {
    throw InvalidArgument("doc_count must be >= 1");
  }
  if (spec.labels &&
      spec.labels->layout.num_topics() != static_cast<int>(phi.rows())) {
    throw DimensionMismatch("label plan layout K differs from planted phi");
  }
  if (spec.fixed_theta && spec.fixed_theta->size() != phi.rows()) {
    throw DimensionMismatch("fixed theta length differs from planted K");
  }
}

}  // namespace

GeneratedCorpus generate_corpus(const GeneratorSpec& spec) {
  check_spec(spec);
  const std::size_t k_count = spec.planted_phi.rows();
  const std::size_t v_count = spec.planted_phi.cols();

  // One entry per document: its label set (empty without a plan).
  std::vector<const LabelSet*> doc_labels;
  static const LabelSet kNoLabels;
  if (spec.labels) {
    for (const auto& [labels, count] : spec.labels->groups) {
      for (int i = 0; i < count; ++i) doc_labels.push_back(&labels);
    }
    if (doc_labels.empty()) throw InvalidArgument("label plan has no documents");
  } else {
    doc_labels.assign(static_cast<std::size_t>(spec.doc_count), &kNoLabels);
  }

  std::vector<std::vector<double>> word_cum(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    word_cum[k] = cumulative(spec.planted_phi.row(k));
  }

  Rng rng(spec.seed);
  GeneratedCorpus out;
  out.theta = Matrix(doc_labels.size(), k_count);
  out.corpus.documents.reserve(doc_labels.size());
  const std::uint32_t length_span =
      static_cast<std::uint32_t>(spec.max_doc_len - spec.min_doc_len + 1);

  for (std::size_t d = 0; d < doc_labels.size(); ++d) {
    std::vector<int32_t> allowed;
    if (spec.labels) {
      std::vector<std::string> names(doc_labels[d]->begin(),
                                     doc_labels[d]->end());
      std::vector<char> on(k_count, 0);
      for (const auto& name : names) {
        const TopicRange r = spec.labels->layout.topics_of(name);
        for (int k = r.begin; k < r.end; ++k) on[k] = 1;
      }
      const TopicRange bg = spec.labels->layout.background();
      for (int k = bg.begin; k < bg.end; ++k) on[k] = 1;
      for (std::size_t k = 0; k < k_count; ++k) {
        if (on[k]) allowed.push_back(static_cast<int32_t>(k));
      }
      if (allowed.empty()) {
        throw InvalidArgument("a label group allows no topics");
      }
    } else {
      for (std::size_t k = 0; k < k_count; ++k) {
        allowed.push_back(static_cast<int32_t>(k));
      }
    }

    auto theta = out.theta.row(d);
    if (spec.fixed_theta) {
      std::copy(spec.fixed_theta->begin(), spec.fixed_theta->end(),
                theta.begin());
    } else {
      const std::vector<double> draw = rng.dirichlet(spec.alpha, allowed.size());
      for (std::size_t j = 0; j < allowed.size(); ++j) {
        theta[allowed[j]] = draw[j];
      }
    }
    const std::vector<double> topic_cum = cumulative(theta);

    Document doc;
    char id[64];
    std::snprintf(id, sizeof id, "%s%06zu", spec.id_prefix.c_str(), d);
    doc.id = id;
    doc.labels.assign(doc_labels[d]->begin(), doc_labels[d]->end());
    const int length = spec.min_doc_len + static_cast<int>(rng.below(length_span));
    doc.tokens.reserve(static_cast<std::size_t>(length));
    for (int i = 0; i < length; ++i) {
      const std::size_t z = sample(topic_cum, rng);
      doc.tokens.push_back(static_cast<int32_t>(sample(word_cum[z], rng)));
    }
    out.corpus.documents.push_back(std::move(doc));
    out.labels.push_back(*doc_labels[d]);
  }

  std::vector<std::vector<int32_t>> id_lists;
  id_lists.reserve(out.corpus.documents.size());
  for (const auto& doc : out.corpus.documents) id_lists.push_back(doc.tokens);
  std::vector<std::string> names(v_count);
  for (std::size_t w = 0; w < v_count; ++w) names[w] = word_name(w, v_count);
  out.corpus.vocabulary =
      Vocabulary(std::move(names),
                 document_frequencies(id_lists, v_count, Execution::kSerial));
  out.corpus.config.stopword_list_id = "none";
  out.corpus.config.min_doc_freq = 1;
  out.corpus.config.min_doc_len = spec.min_doc_len;
  out.corpus.config.language_filter = false;
  return out;
}

Matrix block_topics(int num_topics, int vocab_size, double leak) {
  if (num_topics < 1 || vocab_size < num_topics) {
    throw InvalidArgument("block topics need 1 <= K <= V");
  }
  if (!(leak >= 0.0 && leak < 1.0)) throw InvalidArgument("leak must be in [0,1)");
  const auto k_count = static_cast<std::size_t>(num_topics);
  const auto v_count = static_cast<std::size_t>(vocab_size);
  const std::size_t block = v_count / k_count;
  Matrix phi(k_count, v_count, leak / static_cast<double>(v_count));
  for (std::size_t k = 0; k < k_count; ++k) {
    for (std::size_t w = k * block; w < (k + 1) * block; ++w) {
      phi(k, w) += (1.0 - leak) / static_cast<double>(block);
    }
  }
  return phi;
}

TopicAlignment align_topics(const Matrix& estimated, const Matrix& planted) {
  if (estimated.rows() != planted.rows() ||
      estimated.cols() != planted.cols()) {
    throw DimensionMismatch("estimated and planted phi differ in shape");
  }
  const std::size_t k_count = planted.rows();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(k_count * k_count);
  for (std::size_t i = 0; i < k_count; ++i) {
    for (std::size_t j = 0; j < k_count; ++j) {
      double dist = 0.0;
      for (std::size_t w = 0; w < planted.cols(); ++w) {
        dist += std::abs(estimated(i, w) - planted(j, w));
      }
      pairs.emplace_back(dist, i, j);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  TopicAlignment result;
  result.permutation.assign(k_count, -1);
  std::vector<char> planted_used(k_count, 0);
  double total = 0.0;
  std::size_t matched = 0;
  for (const auto& [dist, i, j] : pairs) {
    if (result.permutation[i] >= 0 || planted_used[j]) continue;
    result.permutation[i] = static_cast<int>(j);
    planted_used[j] = 1;
    total += dist;
    if (++matched == k_count) break;
  }
  result.mean_l1 = total / static_cast<double>(k_count);
  return result;
}

std::vector<RawDocument> to_raw_documents(const GeneratedCorpus& generated,
                                          int filler_every) {
  const Corpus& corpus = generated.corpus;
  std::vector<RawDocument> raw;
  raw.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    RawDocument r;
    r.id = doc.id;
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i > 0) r.text += ' ';
      r.text += corpus.vocabulary.token(doc.tokens[i]);
      if (filler_every > 0 && (i + 1) % static_cast<std::size_t>(filler_every) == 0) {
        r.text += " the";
      }
    }
    r.labels = doc.labels;
    for (const auto& label : doc.labels) {
      const auto colon = label.find(':');
      if (colon == std::string::npos) continue;
      const int level = std::stoi(label.substr(colon + 1));
      r.ratings[label.substr(0, colon)] = {level, level, level};
    }
    raw.push_back(std::move(r));
  }
  return raw;
}

nlohmann::ordered_json truth_json(const GeneratedCorpus& generated,
                                  const Matrix& planted_phi) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["k"] = planted_phi.rows();
  j["v"] = planted_phi.cols();
  j["vocab"] = generated.corpus.vocabulary.tokens();
  j["phi"] = planted_phi.data();
  nlohmann::ordered_json docs = nlohmann::ordered_json::array();
  for (std::size_t d = 0; d < generated.corpus.documents.size(); ++d) {
    nlohmann::ordered_json doc;
    doc["id"] = generated.corpus.documents[d].id;
    const auto row = generated.theta.row(d);
    doc["theta"] = std::vector<double>(row.begin(), row.end());
    doc["labels"] = generated.labels[d];
    docs.push_back(std::move(doc));
  }
  j["docs"] = std::move(docs);
  return j;
}

}  // namespace topicrate
