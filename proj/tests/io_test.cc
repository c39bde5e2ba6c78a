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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

#include "test_support.h"
#include "topicrate/errors.h"
#include "topicrate/io.h"
#include "topicrate/lda.h"
#include "topicrate/plda.h"

namespace topicrate {
namespace {

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(2.0), "2");
  EXPECT_EQ(format_double(1.0 / 3.0), "0.3333333333333333");
  for (double x : {1e-300, 123456.789, -0.25, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_optional(std::nullopt), "");
  EXPECT_EQ(format_optional(0.5), "0.5");
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = testing::scratch_dir("sha");
  const auto path = (dir / "abc.txt").string();
  std::ofstream(path) << "abc";
  EXPECT_EQ(sha256_file(path), sha256_hex("abc"));
}

TEST(Files, AtomicWriteAndRead) {
  const auto dir = testing::scratch_dir("atomic");
  const auto path = (dir / "out.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  EXPECT_EQ(read_file(path), "second");
  std::size_t entries = 0;
  for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) {
    ++entries;
  }
  EXPECT_EQ(entries, 1u);
}

TEST(Files, GzipRoundTripIsReproducible) {
  const auto dir = testing::scratch_dir("gzip");
  const std::string content(10000, 'x');
  const auto a = (dir / "a.json.gz").string();
  const auto b = (dir / "b.json.gz").string();
  write_file_atomic(a, content);
  write_file_atomic(b, content);
  EXPECT_EQ(read_file(a), content);
  EXPECT_LT(std::filesystem::file_size(a), content.size());
  EXPECT_EQ(sha256_file(a), sha256_file(b));
}

TEST(Jsonl, RoundTrip) {
  std::vector<RawDocument> docs(2);
  docs[0].id = "a";
  docs[0].text = "Hello \"world\"\n";
  docs[0].labels = {"sex:2"};
  docs[0].ratings["sex"] = {1, 2, 3};
  docs[1].id = "b";
  docs[1].text = "plain";
  const auto dir = testing::scratch_dir("jsonl");
  const auto path = (dir / "docs.jsonl").string();
  write_file_atomic(path, to_jsonl(docs));
  const auto back = read_jsonl(path);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].text, docs[0].text);
  EXPECT_EQ(back[0].labels, docs[0].labels);
  EXPECT_EQ(back[0].ratings, docs[0].ratings);
  EXPECT_TRUE(back[1].labels.empty());
}

TEST(Jsonl, MalformedLine) {
  const auto dir = testing::scratch_dir("jsonl_bad");
  const auto path = (dir / "bad.jsonl").string();
  std::ofstream(path) << "{\"id\":\"a\",\"text\":\"x\"}\n{not json\n";
  EXPECT_THROW(read_jsonl(path), FormatError);
}

TEST(CorpusJson, RoundTrip) {
  Corpus c = testing::make_corpus({{0, 1, 1}, {2}}, 3);
  c.documents[0].labels = {"appropriate"};
  c.config.min_doc_freq = 3;
  EXPECT_EQ(corpus_from_json(corpus_to_json(c)), c);
}

TEST(ModelJson, RoundTripWithLayout) {
  Corpus c = testing::make_corpus({{0, 1, 2, 3}, {3, 2, 2}}, 4);
  c.documents[0].labels = {"a"};
  c.documents[1].labels = {"b"};
  TrainConfig config;
  config.iterations = 20;
  config.burn_in = 5;
  const TopicModel m = train_plda(c, build_layout({"a", "b"}, 1, 1), config);
  const auto dir = testing::scratch_dir("model");
  for (const std::string name : {"m.json", "m.json.gz"}) {
    const auto path = (dir / name).string();
    save_model(m, path);
    const TopicModel back = load_model(path);
    EXPECT_EQ(back.phi(), m.phi());
    EXPECT_EQ(back.alpha(), m.alpha());
    EXPECT_EQ(back.layout, m.layout);
    EXPECT_EQ(back.metadata, m.metadata);
    EXPECT_EQ(back.vocabulary(), m.vocabulary());
  }
}

TEST(ModelJson, RejectsWrongVersion) {
  const TopicModel m(Matrix(1, 2, 0.5), 0.1, 0.1,
                     std::make_shared<const Vocabulary>(
                         std::vector<std::string>{"x", "y"},
                         std::vector<int32_t>{1, 1}));
  auto j = model_to_json(m);
  j["version"] = 99;
  EXPECT_THROW(model_from_json(j), FormatError);
}

TEST(ThetaCsv, Layout) {
  Matrix theta(2, 2);
  theta(0, 0) = 0.25;
  theta(0, 1) = 0.75;
  theta(1, 0) = 1.0;
  const std::vector<std::string> ids = {"a", "b"};
  EXPECT_EQ(theta_csv(ids, theta), "doc_id,theta_0,theta_1\na,0.25,0.75\nb,1,0\n");
}

}  // namespace
}  // namespace topicrate
