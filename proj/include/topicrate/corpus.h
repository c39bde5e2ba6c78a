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

#ifndef TOPICRATE_CORPUS_H_
#define TOPICRATE_CORPUS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace topicrate {

// One raw excerpt as read from the JSON-lines input.
struct RawDocument {
  std::string id;
  std::string text;
  std::vector<std::string> labels;
  // Per category ("sex", "drugs", "violence") the three annotator levels.
  std::map<std::string, std::array<int, 3>> ratings;
};

struct PreprocessConfig {
  std::string stopword_list_id = "en-587-v1";
  int min_doc_freq = 15;
  int min_doc_len = 20;
  bool language_filter = true;
  double language_min_ratio = 0.05;

  friend bool operator==(const PreprocessConfig&,
                         const PreprocessConfig&) = default;
};

class StopwordList {
 public:
  StopwordList() = default;
  StopwordList(std::vector<std::string> words, std::string id);

  // The list bundled with the library (data/stopwords_en.txt).
  static const StopwordList& english();
  // One token per line, UTF-8. Blank lines are skipped.
  static StopwordList from_file(const std::string& path);

  bool contains(std::string_view token) const;
  std::size_t size() const { return words_.size(); }
  const std::string& id() const { return id_; }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_set<std::string> set_;
  std::string id_;
};

// Dense token <-> id bijection with per-token document frequencies.
class Vocabulary {
 public:
  Vocabulary() = default;
  // Ids are assigned in the order given.
  Vocabulary(std::vector<std::string> tokens, std::vector<int32_t> doc_freq);

  std::size_t size() const { return tokens_.size(); }
  std::optional<int32_t> find(std::string_view token) const;
  const std::string& token(int32_t id) const { return tokens_[id]; }
  int32_t doc_freq(int32_t id) const { return doc_freq_[id]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::vector<int32_t>& doc_freqs() const { return doc_freq_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.tokens_ == b.tokens_ && a.doc_freq_ == b.doc_freq_;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<int32_t> doc_freq_;
  std::unordered_map<std::string, int32_t> index_;
};

struct Document {
  std::string id;
  std::vector<int32_t> tokens;
  std::vector<std::string> labels;

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  Vocabulary vocabulary;
  std::vector<Document> documents;
  PreprocessConfig config;

  std::size_t token_count() const;
  std::vector<std::string> document_ids() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// PTB-style tokenization: lowercases ASCII, splits clitics (n't 's 're 'll
// 'd 've 'm) and emits punctuation as separate tokens. Curly quotes, the
// ellipsis character and en/em dashes are normalized to ASCII first.
std::vector<std::string> tokenize(std::string_view text);

// True when the token has no ASCII letter or digit and no non-ASCII byte.
bool is_punctuation(std::string_view token);

// Stopword-ratio heuristic: true iff at least `min_ratio` of the tokens are
// English stopwords. An empty sequence is not English.
bool looks_english(std::span<const std::string> tokens,
                   const StopwordList& stopwords, double min_ratio = 0.05);

// Full pipeline: tokenize, drop punctuation, drop stopwords, optional
// language filter, document frequencies, min-doc-freq pruning, min-doc-len
// pruning, then freeze the vocabulary ordered by descending document
// frequency with ties broken lexicographically. Throws EmptyCorpus when
// nothing survives.
Corpus build_corpus(std::span<const RawDocument> raw,
                    const PreprocessConfig& config,
                    const StopwordList& stopwords = StopwordList::english());

// Encodes documents against an existing vocabulary (held-out sets). The
// punctuation, stopword and language steps match build_corpus; documents
// whose content-token count is below min_doc_len are dropped before
// out-of-vocabulary tokens are removed, so the surviving document set does
// not depend on the vocabulary.
std::vector<Document> encode_documents(
    std::span<const RawDocument> raw, const Vocabulary& vocabulary,
    const PreprocessConfig& config,
    const StopwordList& stopwords = StopwordList::english());

}  // namespace topicrate

#endif  // TOPICRATE_CORPUS_H_
