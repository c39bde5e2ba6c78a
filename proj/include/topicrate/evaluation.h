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

#ifndef TOPICRATE_EVALUATION_H_
#define TOPICRATE_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "topicrate/annotations.h"
#include "topicrate/corpus.h"
#include "topicrate/kernels.h"
#include "topicrate/lda.h"
#include "topicrate/model.h"

namespace topicrate {

struct ClassifyConfig {
  double threshold = 0.05;
  // Divide label masses by (1 - background mass) before thresholding.
  bool renormalize_without_background = false;
};

// Category labels whose topic mass reaches the threshold. "appropriate" and
// background mass never produce a prediction.
LabelSet predict_labels(std::span<const double> theta,
                        const LabelTopicLayout& layout,
                        const ClassifyConfig& config);

struct Confusion {
  std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  std::optional<double> precision() const;
  std::optional<double> recall() const;
  std::optional<double> specificity() const;
  // 2TP / (2TP + FP + FN); equals 2PR/(P+R) whenever both are defined.
  std::optional<double> f1() const;

  friend bool operator==(const Confusion&, const Confusion&) = default;
};

struct LevelMetrics {
  int level = 0;
  Confusion counts;
  std::optional<double> precision, recall, specificity, f1;
};

struct CategoryMetrics {
  std::string category;
  std::vector<LevelMetrics> levels;
  // Unweighted means over the levels where each rate is defined.
  std::optional<double> precision, recall, specificity, f1;
  // One entry per undefined (level, rate) cell, e.g. "drugs:4 precision".
  std::vector<std::string> undefined;
};

struct MetricsReport {
  std::size_t documents = 0;
  std::vector<CategoryMetrics> categories;

  const CategoryMetrics& category(std::string_view name) const;
};

// One binary problem per (category, level): gold contains category:level
// versus prediction contains it. Throws DocumentSetMismatch when the two
// maps cover different documents.
MetricsReport metrics_report(const LabelSets& predictions,
                             const LabelSets& gold,
                             std::span<const std::string> categories,
                             std::span<const int> levels);

MetricsReport metrics_report(const LabelSets& predictions,
                             const LabelSets& gold);

nlohmann::ordered_json to_json(const MetricsReport& report);

struct GridSpec {
  std::vector<int> min_doc_freq{1, 5, 10, 15};
  std::vector<int> n_bg{0, 1, 5, 10};
  std::vector<int> n_label{1, 5, 10};
};

struct GridPoint {
  int min_doc_freq = 1;
  int n_bg = 0;
  int n_label = 1;

  friend bool operator==(const GridPoint&, const GridPoint&) = default;
};

struct GridInputs {
  std::span<const RawDocument> train;
  std::span<const RawDocument> test;
  // Label sets for training documents and gold label sets for test
  // documents, keyed by document id.
  LabelSets train_labels;
  LabelSets test_gold;
  std::vector<std::string> layout_labels = standard_labels();
  PreprocessConfig preprocess;
  const StopwordList* stopwords = &StopwordList::english();
  TrainConfig training;   // num_topics and seed are set per configuration
  InferenceConfig infer;  // seed is set per configuration
  ClassifyConfig classify;
  std::uint64_t base_seed = 1;
};

struct GridRow {
  GridPoint point;
  std::uint64_t seed = 0;
  int num_topics = 0;
  std::optional<MetricsReport> report;
  std::string error;
};

// Configurations in min_doc_freq, n_bg, n_label nesting order.
std::vector<GridPoint> expand_grid(const GridSpec& spec);

// Rebuild the vocabulary at the point's min_doc_freq, train PLDA, fold in
// the test documents and score them. Errors are recorded in the row.
GridRow run_grid_point(const GridInputs& inputs, const GridPoint& point,
                       std::uint64_t seed);

// One row per configuration, in expand_grid order; configuration i uses
// seed base_seed + i. kParallel runs configurations on OpenMP threads.
std::vector<GridRow> grid_search(const GridInputs& inputs,
                                 const GridSpec& spec,
                                 Execution execution = Execution::kParallel);

// One line per configuration with per-category rates and per-level
// confusion counts as columns.
std::string grid_csv(std::span<const GridRow> rows);
nlohmann::ordered_json grid_json(std::span<const GridRow> rows);

}  // namespace topicrate

#endif  // TOPICRATE_EVALUATION_H_
