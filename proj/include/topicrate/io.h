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

#ifndef TOPICRATE_IO_H_
#define TOPICRATE_IO_H_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlohmann/json.hpp"
#include "topicrate/corpus.h"
#include "topicrate/matrix.h"
#include "topicrate/model.h"

namespace topicrate {

// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);
std::string format_optional(const std::optional<double>& value);

// Whole-file read; transparently gunzips paths ending in ".gz".
std::string read_file(const std::string& path);
// Writes to a sibling temporary and renames over the target. Paths ending
// in ".gz" are gzip-compressed (header mtime is zero, so output bytes
// depend only on the content).
void write_file_atomic(const std::string& path, std::string_view content);

// Lowercase hex SHA-256 of the file's bytes as stored on disk.
std::string sha256_file(const std::string& path);
std::string sha256_hex(std::string_view bytes);

// JSON-lines documents: {"id", "text", "labels"?, "ratings"?}.
std::vector<RawDocument> read_jsonl(const std::string& path);
std::string to_jsonl(std::span<const RawDocument> documents);

// {"version":1, "config":{...}, "vocab":[...], "doc_freq":[...],
//  "docs":[{"id", "tokens", "labels"}]}
nlohmann::ordered_json corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const nlohmann::json& j);

// Versioned model file: metadata, vocabulary, flattened row-major phi and
// the optional label layout.
nlohmann::ordered_json model_to_json(const TopicModel& model);
TopicModel model_from_json(const nlohmann::json& j);

void save_model(const TopicModel& model, const std::string& path);
TopicModel load_model(const std::string& path);

// doc_id, theta_0 ... theta_{K-1}
std::string theta_csv(std::span<const std::string> doc_ids,
                      const Matrix& thetas);

}  // namespace topicrate

#endif  // TOPICRATE_IO_H_
