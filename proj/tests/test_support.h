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

#ifndef TOPICRATE_TESTS_TEST_SUPPORT_H_
#define TOPICRATE_TESTS_TEST_SUPPORT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "topicrate/annotations.h"
#include "topicrate/corpus.h"
#include "topicrate/lda.h"

namespace topicrate::testing {

// Corpus over tokens "t0".."t{V-1}" with the given id sequences.
inline Corpus make_corpus(const std::vector<std::vector<int32_t>>& docs,
                          int vocab_size) {
  Corpus c;
  std::vector<std::string> names;
  std::vector<int32_t> df(static_cast<std::size_t>(vocab_size), 0);
  for (int w = 0; w < vocab_size; ++w) names.push_back("t" + std::to_string(w));
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::vector<char> seen(static_cast<std::size_t>(vocab_size), 0);
    for (int32_t w : docs[d]) {
      if (!seen[w]) ++df[w];
      seen[w] = 1;
    }
    c.documents.push_back({"d" + std::to_string(d), docs[d], {}});
  }
  c.vocabulary = Vocabulary(std::move(names), std::move(df));
  return c;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("topicrate_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Exact log joint p(w, z) of the collapsed model, up to a constant that
// does not depend on z.
inline double log_joint(const Corpus& corpus,
                        const std::vector<std::vector<int32_t>>& z, int k,
                        double alpha, double beta) {
  const int v = static_cast<int>(corpus.vocabulary.size());
  std::vector<std::vector<int>> nkw(k, std::vector<int>(v, 0));
  std::vector<int> nk(k, 0);
  double lp = 0.0;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    std::vector<int> ndk(k, 0);
    const auto& tokens = corpus.documents[d].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      ++ndk[z[d][i]];
      ++nkw[z[d][i]][tokens[i]];
      ++nk[z[d][i]];
    }
    for (int t = 0; t < k; ++t) lp += std::lgamma(ndk[t] + alpha);
    lp -= std::lgamma(static_cast<double>(tokens.size()) + k * alpha);
  }
  for (int t = 0; t < k; ++t) {
    for (int w = 0; w < v; ++w) lp += std::lgamma(nkw[t][w] + beta);
    lp -= std::lgamma(nk[t] + v * beta);
  }
  return lp;
}

}  // namespace topicrate::testing

#endif  // TOPICRATE_TESTS_TEST_SUPPORT_H_
