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

#include "topicrate/io.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "topicrate/errors.h"

namespace topicrate {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw FormatError("cannot format double");
  return std::string(buf.data(), ptr);
}

std::string format_optional(const std::optional<double>& value) {
  return value ? format_double(*value) : std::string();
}

namespace {

bool is_gzip_path(const std::string& path) { return path.ends_with(".gz"); }

std::string gunzip_file(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw InvalidArgument("cannot open " + path);
  std::string out;
  std::array<char, 1 << 16> buf{};
  int n;
  while ((n = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  const bool failed = n < 0;
  gzclose(f);
  if (failed) throw FormatError("corrupt gzip stream in " + path);
  return out;
}

std::string gzip_bytes(std::string_view content) {
  z_stream zs{};
  // windowBits 15 + 16 selects the gzip wrapper; its header carries mtime 0.
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, 15 + 16, 8,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw FormatError("deflateInit2 failed");
  }
  std::string out;
  out.resize(deflateBound(&zs, static_cast<uLong>(content.size())));
  zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(content.data()));
  zs.avail_in = static_cast<uInt>(content.size());
  zs.next_out = reinterpret_cast<Bytef*>(out.data());
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw FormatError("gzip compression failed");
  out.resize(zs.total_out);
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  if (is_gzip_path(path)) return gunzip_file(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot write " + tmp.string());
    if (is_gzip_path(path)) {
      const std::string packed = gzip_bytes(content);
      out.write(packed.data(), static_cast<std::streamsize>(packed.size()));
    } else {
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
    }
    if (!out) throw InvalidArgument("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len,
                 EVP_sha256(), nullptr) != 1) {
    throw FormatError("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::vector<RawDocument> read_jsonl(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<RawDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      RawDocument doc;
      doc.id = j.at("id").get<std::string>();
      doc.text = j.at("text").get<std::string>();
      if (j.contains("labels") && !j["labels"].is_null()) {
        doc.labels = j["labels"].get<std::vector<std::string>>();
      }
      if (j.contains("ratings") && !j["ratings"].is_null()) {
        for (const auto& [category, levels] : j["ratings"].items()) {
          const auto v = levels.get<std::vector<int>>();
          if (v.size() != 3) {
            throw FormatError("ratings for '" + category +
                              "' must have exactly three entries");
          }
          doc.ratings[category] = {v[0], v[1], v[2]};
        }
      }
      docs.push_back(std::move(doc));
    } catch (const json::exception& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " +
                        e.what());
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
  }
  return docs;
}

std::string to_jsonl(std::span<const RawDocument> documents) {
  std::string out;
  for (const auto& doc : documents) {
    ordered_json j;
    j["id"] = doc.id;
    j["text"] = doc.text;
    if (!doc.labels.empty()) j["labels"] = doc.labels;
    if (!doc.ratings.empty()) {
      ordered_json r = ordered_json::object();
      for (const auto& [category, levels] : doc.ratings) {
        r[category] = {levels[0], levels[1], levels[2]};
      }
      j["ratings"] = std::move(r);
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

namespace {

ordered_json preprocess_to_json(const PreprocessConfig& c) {
  ordered_json j;
  j["stopword_list"] = c.stopword_list_id;
  j["min_doc_freq"] = c.min_doc_freq;
  j["min_doc_len"] = c.min_doc_len;
  j["language_filter"] = c.language_filter;
  j["language_min_ratio"] = c.language_min_ratio;
  return j;
}

PreprocessConfig preprocess_from_json(const json& j) {
  PreprocessConfig c;
  c.stopword_list_id = j.at("stopword_list").get<std::string>();
  c.min_doc_freq = j.at("min_doc_freq").get<int>();
  c.min_doc_len = j.at("min_doc_len").get<int>();
  c.language_filter = j.at("language_filter").get<bool>();
  c.language_min_ratio = j.at("language_min_ratio").get<double>();
  return c;
}

const char* estimator_name(Estimator e) {
  return e == Estimator::kAverage ? "average" : "final";
}

}  // namespace

ordered_json corpus_to_json(const Corpus& corpus) {
  ordered_json j;
  j["version"] = 1;
  j["config"] = preprocess_to_json(corpus.config);
  j["vocab"] = corpus.vocabulary.tokens();
  j["doc_freq"] = corpus.vocabulary.doc_freqs();
  ordered_json docs = ordered_json::array();
  for (const auto& d : corpus.documents) {
    ordered_json doc;
    doc["id"] = d.id;
    doc["tokens"] = d.tokens;
    doc["labels"] = d.labels;
    docs.push_back(std::move(doc));
  }
  j["docs"] = std::move(docs);
  return j;
}

Corpus corpus_from_json(const json& j) {
  try {
    if (j.at("version").get<int>() != 1) {
      throw FormatError("unsupported corpus version");
    }
    Corpus corpus;
    corpus.config = preprocess_from_json(j.at("config"));
    corpus.vocabulary =
        Vocabulary(j.at("vocab").get<std::vector<std::string>>(),
                   j.at("doc_freq").get<std::vector<int32_t>>());
    const auto v = static_cast<int32_t>(corpus.vocabulary.size());
    for (const auto& d : j.at("docs")) {
      Document doc;
      doc.id = d.at("id").get<std::string>();
      doc.tokens = d.at("tokens").get<std::vector<int32_t>>();
      doc.labels = d.at("labels").get<std::vector<std::string>>();
      for (int32_t t : doc.tokens) {
        if (t < 0 || t >= v) throw FormatError("token id out of range");
      }
      corpus.documents.push_back(std::move(doc));
    }
    return corpus;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed corpus file: ") + e.what());
  }
}

ordered_json model_to_json(const TopicModel& model) {
  ordered_json j;
  j["format"] = "topicrate-model";
  j["version"] = 1;
  ordered_json meta;
  meta["k"] = model.num_topics();
  meta["alpha"] = model.alpha();
  meta["beta"] = model.beta();
  meta["seed"] = model.metadata.seed;
  meta["iterations"] = model.metadata.iterations;
  meta["burn_in"] = model.metadata.burn_in;
  meta["estimator"] = estimator_name(model.metadata.estimator);
  meta["thinning"] = model.metadata.thinning;
  meta["preprocess"] = preprocess_to_json(model.metadata.preprocess);
  j["metadata"] = std::move(meta);
  j["vocab"] = model.vocabulary().tokens();
  j["doc_freq"] = model.vocabulary().doc_freqs();
  j["phi"] = model.phi().data();
  if (model.layout) {
    ordered_json layout;
    layout["labels"] = model.layout->labels();
    layout["n_label"] = model.layout->topics_per_label();
    layout["n_bg"] = model.layout->background_count();
    j["layout"] = std::move(layout);
  }
  return j;
}

TopicModel model_from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "topicrate-model" ||
        j.at("version").get<int>() != 1) {
      throw FormatError("not a version 1 topicrate model");
    }
    const json& meta = j.at("metadata");
    const auto k = meta.at("k").get<std::size_t>();
    auto vocab = std::make_shared<const Vocabulary>(
        j.at("vocab").get<std::vector<std::string>>(),
        j.at("doc_freq").get<std::vector<int32_t>>());
    Matrix phi(k, vocab->size());
    phi.data() = j.at("phi").get<std::vector<double>>();
    if (phi.data().size() != k * vocab->size()) {
      throw FormatError("phi has the wrong number of entries");
    }
    TopicModel model(std::move(phi), meta.at("alpha").get<double>(),
                     meta.at("beta").get<double>(), std::move(vocab));
    model.metadata.seed = meta.at("seed").get<std::uint64_t>();
    model.metadata.iterations = meta.at("iterations").get<int>();
    model.metadata.burn_in = meta.at("burn_in").get<int>();
    model.metadata.estimator = meta.at("estimator").get<std::string>() ==
                                       "average"
                                   ? Estimator::kAverage
                                   : Estimator::kFinalState;
    model.metadata.thinning = meta.at("thinning").get<int>();
    model.metadata.preprocess = preprocess_from_json(meta.at("preprocess"));
    if (j.contains("layout")) {
      const json& l = j["layout"];
      model.layout = LabelTopicLayout(
          l.at("labels").get<std::vector<std::string>>(),
          l.at("n_label").get<int>(), l.at("n_bg").get<int>());
      if (model.layout->num_topics() != static_cast<int>(k)) {
        throw FormatError("layout topic count differs from k");
      }
    }
    return model;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const TopicModel& model, const std::string& path) {
  write_file_atomic(path, model_to_json(model).dump() + "\n");
}

TopicModel load_model(const std::string& path) {
  try {
    return model_from_json(json::parse(read_file(path)));
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

std::string theta_csv(std::span<const std::string> doc_ids,
                      const Matrix& thetas) {
  if (doc_ids.size() != thetas.rows()) {
    throw DimensionMismatch("theta rows do not match document ids");
  }
  std::string out = "doc_id";
  for (std::size_t k = 0; k < thetas.cols(); ++k) {
    out += ",theta_" + std::to_string(k);
  }
  out += '\n';
  for (std::size_t d = 0; d < thetas.rows(); ++d) {
    out += doc_ids[d];
    for (double x : thetas.row(d)) {
      out += ',';
      out += format_double(x);
    }
    out += '\n';
  }
  return out;
}

}  // namespace topicrate
