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

#include "topicrate/evaluation.h"

#include <algorithm>

#include "topicrate/errors.h"
#include "topicrate/io.h"
#include "topicrate/plda.h"

namespace topicrate {

using nlohmann::ordered_json;

LabelSet predict_labels(std::span<const double> theta,
                        const LabelTopicLayout& layout,
                        const ClassifyConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw InvalidArgument("threshold must lie in (0,1)");
  }
  const auto mass = label_mass(theta, layout);
  double scale = 1.0;
  if (config.renormalize_without_background) {
    const double rest = 1.0 - mass.at(std::string(kBackgroundKey));
    scale = rest > 0.0 ? 1.0 / rest : 0.0;
  }
  LabelSet predicted;
  for (const auto& [label, m] : mass) {
    if (label == kBackgroundKey || label == kAppropriateLabel) continue;
    if (m * scale >= config.threshold) predicted.insert(label);
  }
  return predicted;
}

namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> Confusion::precision() const { return ratio(tp, tp + fp); }
std::optional<double> Confusion::recall() const { return ratio(tp, tp + fn); }
std::optional<double> Confusion::specificity() const {
  return ratio(tn, tn + fp);
}
std::optional<double> Confusion::f1() const {
  return ratio(2 * tp, 2 * tp + fp + fn);
}

const CategoryMetrics& MetricsReport::category(std::string_view name) const {
  for (const auto& c : categories) {
    if (c.category == name) return c;
  }
  throw InvalidArgument("no metrics for category " + std::string(name));
}

MetricsReport metrics_report(const LabelSets& predictions,
                             const LabelSets& gold,
                             std::span<const std::string> categories,
                             std::span<const int> levels) {
  const bool same_docs =
      predictions.size() == gold.size() &&
      std::equal(predictions.begin(), predictions.end(), gold.begin(),
                 [](const auto& a, const auto& b) { return a.first == b.first; });
  if (!same_docs) {
    throw DocumentSetMismatch("predictions and gold cover different documents");
  }
  MetricsReport report;
  report.documents = gold.size();
  for (const auto& category : categories) {
    CategoryMetrics cm;
    cm.category = category;
    struct Mean {
      double sum = 0.0;
      int n = 0;
      void add(const std::optional<double>& v) {
        if (v) {
          sum += *v;
          ++n;
        }
      }
      std::optional<double> value() const {
        return n ? std::optional<double>(sum / n) : std::nullopt;
      }
    } p, r, s, f;
    for (int level : levels) {
      const std::string label = category_label(category, level);
      LevelMetrics lm;
      lm.level = level;
      auto pit = predictions.begin();
      for (const auto& [id, gold_labels] : gold) {
        const bool truth = gold_labels.contains(label);
        const bool guess = (pit++)->second.contains(label);
        if (truth && guess) ++lm.counts.tp;
        else if (!truth && guess) ++lm.counts.fp;
        else if (truth) ++lm.counts.fn;
        else ++lm.counts.tn;
      }
      lm.precision = lm.counts.precision();
      lm.recall = lm.counts.recall();
      lm.specificity = lm.counts.specificity();
      lm.f1 = lm.counts.f1();
      p.add(lm.precision);
      r.add(lm.recall);
      s.add(lm.specificity);
      f.add(lm.f1);
      if (!lm.precision) cm.undefined.push_back(label + " precision");
      if (!lm.recall) cm.undefined.push_back(label + " recall");
      if (!lm.specificity) cm.undefined.push_back(label + " specificity");
      if (!lm.f1) cm.undefined.push_back(label + " f1");
      cm.levels.push_back(lm);
    }
    cm.precision = p.value();
    cm.recall = r.value();
    cm.specificity = s.value();
    cm.f1 = f.value();
    report.categories.push_back(std::move(cm));
  }
  return report;
}

MetricsReport metrics_report(const LabelSets& predictions,
                             const LabelSets& gold) {
  return metrics_report(predictions, gold, kCategories, kLabelLevels);
}

namespace {

ordered_json optional_json(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

ordered_json to_json(const MetricsReport& report) {
  ordered_json j;
  j["documents"] = report.documents;
  ordered_json cats = ordered_json::array();
  for (const auto& c : report.categories) {
    ordered_json cj;
    cj["category"] = c.category;
    cj["precision"] = optional_json(c.precision);
    cj["recall"] = optional_json(c.recall);
    cj["specificity"] = optional_json(c.specificity);
    cj["f1"] = optional_json(c.f1);
    cj["undefined"] = c.undefined;
    ordered_json levels = ordered_json::array();
    for (const auto& l : c.levels) {
      ordered_json lj;
      lj["level"] = l.level;
      lj["tp"] = l.counts.tp;
      lj["fp"] = l.counts.fp;
      lj["fn"] = l.counts.fn;
      lj["tn"] = l.counts.tn;
      lj["precision"] = optional_json(l.precision);
      lj["recall"] = optional_json(l.recall);
      lj["specificity"] = optional_json(l.specificity);
      lj["f1"] = optional_json(l.f1);
      levels.push_back(std::move(lj));
    }
    cj["levels"] = std::move(levels);
    cats.push_back(std::move(cj));
  }
  j["categories"] = std::move(cats);
  return j;
}

std::vector<GridPoint> expand_grid(const GridSpec& spec) {
  std::vector<GridPoint> points;
  for (int mdf : spec.min_doc_freq) {
    for (int bg : spec.n_bg) {
      for (int nl : spec.n_label) points.push_back({mdf, bg, nl});
    }
  }
  return points;
}

GridRow run_grid_point(const GridInputs& inputs, const GridPoint& point,
                       std::uint64_t seed) {
  GridRow row;
  row.point = point;
  row.seed = seed;
  try {
    PreprocessConfig pre = inputs.preprocess;
    pre.min_doc_freq = point.min_doc_freq;
    Corpus train = build_corpus(inputs.train, pre, *inputs.stopwords);
    for (auto& doc : train.documents) {
      auto it = inputs.train_labels.find(doc.id);
      if (it != inputs.train_labels.end()) {
        doc.labels.assign(it->second.begin(), it->second.end());
      }
      if (doc.labels.empty()) doc.labels = {std::string(kAppropriateLabel)};
    }
    const LabelTopicLayout layout =
        build_layout(inputs.layout_labels, point.n_label, point.n_bg);
    row.num_topics = layout.num_topics();

    TrainConfig train_config = inputs.training;
    train_config.seed = seed;
    const TopicModel model = train_plda(train, layout, train_config);

    const std::vector<Document> test =
        encode_documents(inputs.test, model.vocabulary(), pre,
                         *inputs.stopwords);
    InferenceConfig infer = inputs.infer;
    infer.seed = seed;
    const Matrix thetas = infer_thetas(model, test, infer, Execution::kSerial);

    LabelSets predictions, gold;
    for (std::size_t d = 0; d < test.size(); ++d) {
      auto it = inputs.test_gold.find(test[d].id);
      if (it == inputs.test_gold.end()) continue;
      gold[test[d].id] = it->second;
      predictions[test[d].id] =
          predict_labels(thetas.row(d), layout, inputs.classify);
    }
    if (gold.empty()) throw EmptyInput("no test document has gold labels");
    row.report = metrics_report(predictions, gold);
  } catch (const std::exception& e) {
    row.report.reset();
    row.error = e.what();
  }
  return row;
}

std::vector<GridRow> grid_search(const GridInputs& inputs,
                                 const GridSpec& spec, Execution execution) {
  if (spec.min_doc_freq.empty() || spec.n_bg.empty() || spec.n_label.empty()) {
    throw InvalidArgument("every grid axis needs at least one value");
  }
  const std::vector<GridPoint> points = expand_grid(spec);
  std::vector<GridRow> rows(points.size());
  const auto n = static_cast<std::int64_t>(points.size());
  if (execution == Execution::kSerial) {
    for (std::int64_t i = 0; i < n; ++i) {
      rows[i] = run_grid_point(inputs, points[i], inputs.base_seed + i);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      rows[i] = run_grid_point(inputs, points[i], inputs.base_seed + i);
    }
  }
  return rows;
}

std::string grid_csv(std::span<const GridRow> rows) {
  std::string out = "min_doc_freq,n_bg,n_label,num_topics,seed,status";
  for (const auto& c : kCategories) {
    for (const char* rate : {"precision", "recall", "specificity", "f1"}) {
      out += "," + c + "_" + rate;
    }
    for (int level : kLabelLevels) {
      for (const char* cell : {"tp", "fp", "fn", "tn"}) {
        out += "," + c + "_" + std::to_string(level) + "_" + cell;
      }
    }
  }
  out += '\n';
  for (const auto& row : rows) {
    out += std::to_string(row.point.min_doc_freq) + "," +
           std::to_string(row.point.n_bg) + "," +
           std::to_string(row.point.n_label) + "," +
           std::to_string(row.num_topics) + "," + std::to_string(row.seed) +
           "," + (row.report ? "ok" : "error");
    for (const auto& c : kCategories) {
      const CategoryMetrics* cm =
          row.report ? &row.report->category(c) : nullptr;
      for (auto rate : {&CategoryMetrics::precision, &CategoryMetrics::recall,
                        &CategoryMetrics::specificity, &CategoryMetrics::f1}) {
        out += ",";
        if (cm) out += format_optional(cm->*rate);
      }
      for (std::size_t l = 0; l < kLabelLevels.size(); ++l) {
        for (auto cell : {&Confusion::tp, &Confusion::fp, &Confusion::fn,
                          &Confusion::tn}) {
          out += ",";
          if (cm) out += std::to_string(cm->levels[l].counts.*cell);
        }
      }
    }
    out += '\n';
  }
  return out;
}

ordered_json grid_json(std::span<const GridRow> rows) {
  ordered_json out = ordered_json::array();
  for (const auto& row : rows) {
    ordered_json j;
    j["min_doc_freq"] = row.point.min_doc_freq;
    j["n_bg"] = row.point.n_bg;
    j["n_label"] = row.point.n_label;
    j["num_topics"] = row.num_topics;
    j["seed"] = row.seed;
    if (row.report) {
      j["metrics"] = to_json(*row.report);
    } else {
      j["error"] = row.error;
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace topicrate
