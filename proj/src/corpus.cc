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

#include "topicrate/corpus.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "topicrate/errors.h"
#include "topicrate/kernels.h"

namespace topicrate {

// Defined in the generated stopwords_en.cc.
const std::vector<std::string>& bundled_english_stopwords();

StopwordList::StopwordList(std::vector<std::string> words, std::string id)
    : words_(std::move(words)), id_(std::move(id)) {
  set_.reserve(words_.size());
  for (const auto& w : words_) set_.insert(w);
}

const StopwordList& StopwordList::english() {
  static const StopwordList list(bundled_english_stopwords(), "en-587-v1");
  return list;
}

StopwordList StopwordList::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open stopword list: " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
      line.pop_back();
    }
    if (!line.empty()) words.push_back(line);
  }
  return StopwordList(std::move(words), "file:" + path);
}

bool StopwordList::contains(std::string_view token) const {
  return set_.find(std::string(token)) != set_.end();
}

Vocabulary::Vocabulary(std::vector<std::string> tokens,
                       std::vector<int32_t> doc_freq)
    : tokens_(std::move(tokens)), doc_freq_(std::move(doc_freq)) {
  if (tokens_.size() != doc_freq_.size()) {
    throw DimensionMismatch("vocabulary tokens and doc_freq differ in length");
  }
  index_.reserve(tokens_.size());
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    if (!index_.emplace(tokens_[i], static_cast<int32_t>(i)).second) {
      throw InvalidArgument("duplicate vocabulary token: " + tokens_[i]);
    }
  }
}

std::optional<int32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.tokens.size();
  return n;
}

std::vector<std::string> Corpus::document_ids() const {
  std::vector<std::string> ids;
  ids.reserve(documents.size());
  for (const auto& d : documents) ids.push_back(d.id);
  return ids;
}

bool looks_english(std::span<const std::string> tokens,
                   const StopwordList& stopwords, double min_ratio) {
  if (tokens.empty()) return false;
  const auto hits = std::count_if(
      tokens.begin(), tokens.end(),
      [&](const std::string& t) { return stopwords.contains(t); });
  return static_cast<double>(hits) >=
         min_ratio * static_cast<double>(tokens.size());
}

namespace {

struct ContentTokens {
  std::vector<std::string> tokens;  // punctuation and stopwords removed
  bool english = true;
};

ContentTokens content_tokens(const RawDocument& doc,
                             const PreprocessConfig& config,
                             const StopwordList& stopwords) {
  std::vector<std::string> words = tokenize(doc.text);
  std::erase_if(words, [](const std::string& t) { return is_punctuation(t); });
  ContentTokens out;
  if (config.language_filter) {
    out.english = looks_english(words, stopwords, config.language_min_ratio);
  }
  std::erase_if(words,
                [&](const std::string& t) { return stopwords.contains(t); });
  out.tokens = std::move(words);
  return out;
}

void validate(const PreprocessConfig& config) {
  if (config.min_doc_freq < 1) {
    throw InvalidArgument("min_doc_freq must be >= 1");
  }
  if (config.min_doc_len < 1) {
    throw InvalidArgument("min_doc_len must be >= 1");
  }
}

}  // namespace

Corpus build_corpus(std::span<const RawDocument> raw,
                    const PreprocessConfig& config,
                    const StopwordList& stopwords) {
  validate(config);

  struct Pending {
    const RawDocument* source;
    std::vector<int32_t> ids;  // provisional ids into `tokens`
  };
  std::vector<Pending> pending;
  std::unordered_map<std::string, int32_t> provisional;
  std::vector<std::string> tokens;

  for (const auto& doc : raw) {
    ContentTokens content = content_tokens(doc, config, stopwords);
    if (!content.english || content.tokens.empty()) continue;
    Pending p{&doc, {}};
    p.ids.reserve(content.tokens.size());
    for (auto& t : content.tokens) {
      auto [it, inserted] =
          provisional.emplace(t, static_cast<int32_t>(tokens.size()));
      if (inserted) tokens.push_back(std::move(t));
      p.ids.push_back(it->second);
    }
    pending.push_back(std::move(p));
  }

  std::vector<std::vector<int32_t>> id_lists;
  id_lists.reserve(pending.size());
  for (const auto& p : pending) id_lists.push_back(p.ids);
  const std::vector<int32_t> df =
      document_frequencies(id_lists, tokens.size(), Execution::kSerial);

  // Drop rare tokens, then short documents.
  std::vector<std::vector<int32_t>> kept_ids;
  std::vector<const RawDocument*> kept_docs;
  for (const auto& p : pending) {
    std::vector<int32_t> ids;
    ids.reserve(p.ids.size());
    for (int32_t id : p.ids) {
      if (df[id] >= config.min_doc_freq) ids.push_back(id);
    }
    if (static_cast<int>(ids.size()) < config.min_doc_len) continue;
    kept_ids.push_back(std::move(ids));
    kept_docs.push_back(p.source);
  }
  if (kept_docs.empty()) {
    throw EmptyCorpus("every document was filtered out during preprocessing");
  }

  // Freeze: tokens still used by a retained document, ordered by
  // descending doc_freq then lexicographically.
  std::vector<char> used(tokens.size(), 0);
  for (const auto& ids : kept_ids) {
    for (int32_t id : ids) used[id] = 1;
  }
  std::vector<int32_t> order;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (used[i]) order.push_back(static_cast<int32_t>(i));
  }
  std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
    if (df[a] != df[b]) return df[a] > df[b];
    return tokens[a] < tokens[b];
  });
  std::vector<int32_t> remap(tokens.size(), -1);
  std::vector<std::string> vocab_tokens;
  std::vector<int32_t> vocab_df;
  vocab_tokens.reserve(order.size());
  vocab_df.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    remap[order[i]] = static_cast<int32_t>(i);
    vocab_tokens.push_back(tokens[order[i]]);
    vocab_df.push_back(df[order[i]]);
  }

  Corpus corpus;
  corpus.config = config;
  corpus.config.stopword_list_id = stopwords.id();
  corpus.vocabulary = Vocabulary(std::move(vocab_tokens), std::move(vocab_df));
  corpus.documents.reserve(kept_docs.size());
  std::unordered_set<std::string> seen_ids;
  for (std::size_t d = 0; d < kept_docs.size(); ++d) {
    if (!seen_ids.insert(kept_docs[d]->id).second) {
      throw InvalidArgument("duplicate document id: " + kept_docs[d]->id);
    }
    Document doc;
    doc.id = kept_docs[d]->id;
    doc.labels = kept_docs[d]->labels;
    doc.tokens.reserve(kept_ids[d].size());
    for (int32_t id : kept_ids[d]) doc.tokens.push_back(remap[id]);
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

std::vector<Document> encode_documents(std::span<const RawDocument> raw,
                                       const Vocabulary& vocabulary,
                                       const PreprocessConfig& config,
                                       const StopwordList& stopwords) {
  validate(config);
  std::vector<Document> out;
  for (const auto& doc : raw) {
    ContentTokens content = content_tokens(doc, config, stopwords);
    if (!content.english) continue;
    if (static_cast<int>(content.tokens.size()) < config.min_doc_len) continue;
    Document encoded;
    encoded.id = doc.id;
    encoded.labels = doc.labels;
    for (const auto& t : content.tokens) {
      if (auto id = vocabulary.find(t)) encoded.tokens.push_back(*id);
    }
    out.push_back(std::move(encoded));
  }
  return out;
}

}  // namespace topicrate
