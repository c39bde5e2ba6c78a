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

#include "topicrate/annotations.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "topicrate/errors.h"
#include "topicrate/model.h"

namespace topicrate {

std::string category_label(std::string_view category, int level) {
  return std::string(category) + ":" + std::to_string(level);
}

std::vector<std::string> standard_labels() {
  std::vector<std::string> labels{std::string(kAppropriateLabel)};
  for (const auto& c : kCategories) {
    for (int level : kLabelLevels) labels.push_back(category_label(c, level));
  }
  return labels;
}

void validate(const AnnotationRecord& record) {
  if (std::find(kCategories.begin(), kCategories.end(), record.category) ==
      kCategories.end()) {
    throw MalformedAnnotation("unknown category '" + record.category +
                              "' for document " + record.doc_id);
  }
  for (int r : record.ratings) {
    if (r < 1 || r > 4) {
      throw MalformedAnnotation("rating " + std::to_string(r) +
                                " outside [1,4] for document " +
                                record.doc_id);
    }
  }
}

double fleiss_kappa(std::span<const std::vector<int>> item_counts,
                    int raters) {
  if (raters < 2) throw InvalidArgument("Fleiss' kappa needs >= 2 raters");
  if (item_counts.empty()) throw EmptyInput("Fleiss' kappa needs >= 1 item");
  const std::size_t categories = item_counts.front().size();
  std::vector<double> marginal(categories, 0.0);
  double agreement_sum = 0.0;
  const double n = raters;
  for (const auto& counts : item_counts) {
    if (counts.size() != categories) {
      throw DimensionMismatch("items have differing category counts");
    }
    int total = 0;
    double squares = 0.0;
    for (std::size_t c = 0; c < categories; ++c) {
      if (counts[c] < 0) throw InvalidArgument("negative rating count");
      total += counts[c];
      squares += static_cast<double>(counts[c]) * counts[c];
      marginal[c] += counts[c];
    }
    if (total != raters) {
      throw InvalidArgument("item counts do not sum to the number of raters");
    }
    agreement_sum += (squares - n) / (n * (n - 1.0));
  }
  const double items = static_cast<double>(item_counts.size());
  const double mean_agreement = agreement_sum / items;
  double expected = 0.0;
  for (double m : marginal) {
    const double p = m / (items * n);
    expected += p * p;
  }
  if (expected >= 1.0) {
    throw DegenerateAgreement(
        "all ratings fall in one category; kappa is undefined");
  }
  return (mean_agreement - expected) / (1.0 - expected);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionMismatch("vectors differ in length");
  if (x.size() < 2) throw InvalidArgument("Pearson needs >= 2 observations");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ZeroVariance("Pearson correlation of a constant vector");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::array<std::optional<double>, 3> pearson_pairwise(
    std::span<const int> first, std::span<const int> second,
    std::span<const int> third) {
  auto as_double = [](std::span<const int> v) {
    return std::vector<double>(v.begin(), v.end());
  };
  const std::array<std::vector<double>, 3> r = {
      as_double(first), as_double(second), as_double(third)};
  constexpr std::array<std::pair<int, int>, 3> kPairs = {
      {{0, 1}, {0, 2}, {1, 2}}};
  std::array<std::optional<double>, 3> out;
  for (std::size_t p = 0; p < kPairs.size(); ++p) {
    try {
      out[p] = pearson(r[kPairs[p].first], r[kPairs[p].second]);
    } catch (const ZeroVariance&) {
      out[p] = std::nullopt;
    }
  }
  return out;
}

namespace {

int median_of_three(std::array<int, 3> r) {
  std::sort(r.begin(), r.end());
  return r[1];
}

}  // namespace

LabelSets build_label_sets(std::span<const AnnotationRecord> annotations,
                           std::span<const std::string> all_doc_ids,
                           const LabelSetOptions& options) {
  LabelSets sets;
  for (const auto& id : all_doc_ids) sets[id];
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& record : annotations) {
    validate(record);
    if (!seen.emplace(record.doc_id, record.category).second) {
      throw MalformedAnnotation("duplicate annotation for " + record.doc_id +
                                "/" + record.category);
    }
    auto it = sets.find(record.doc_id);
    if (it == sets.end()) continue;  // document outside this split
    if (options.mode == LabelMode::kConsensus) {
      const int level = median_of_three(record.ratings);
      if (level >= 2) it->second.insert(category_label(record.category, level));
    } else {
      for (int level : record.ratings) {
        if (level >= 2) {
          it->second.insert(category_label(record.category, level));
        }
      }
    }
  }
  for (auto& [id, labels] : sets) {
    if (labels.empty() || options.appropriate_on_all) {
      labels.insert(std::string(kAppropriateLabel));
    }
  }
  return sets;
}

double average_rating(std::span<const AnnotationRecord> annotations,
                      std::string_view doc_id, std::string_view category) {
  for (const auto& record : annotations) {
    if (record.doc_id == doc_id && record.category == category) {
      validate(record);
      return (record.ratings[0] + record.ratings[1] + record.ratings[2]) / 3.0;
    }
  }
  return 1.0;
}

RatingTable::RatingTable(std::span<const AnnotationRecord> annotations) {
  for (const auto& record : annotations) {
    validate(record);
    mean_[{record.doc_id, record.category}] =
        (record.ratings[0] + record.ratings[1] + record.ratings[2]) / 3.0;
  }
}

double RatingTable::average(std::string_view doc_id,
                            std::string_view category) const {
  auto it = mean_.find(
      std::pair<std::string, std::string>(doc_id, category));
  return it == mean_.end() ? 1.0 : it->second;
}

AgreementReport agreement_report(
    std::span<const AnnotationRecord> annotations) {
  AgreementReport report;
  for (const auto& category : kCategories) {
    CategoryAgreement agreement;
    agreement.category = category;
    std::vector<std::vector<int>> counts;
    std::array<std::vector<int>, 3> by_annotator;
    for (const auto& record : annotations) {
      if (record.category != category) continue;
      validate(record);
      std::vector<int> c(4, 0);
      for (std::size_t a = 0; a < 3; ++a) {
        ++c[record.ratings[a] - 1];
        by_annotator[a].push_back(record.ratings[a]);
      }
      counts.push_back(std::move(c));
    }
    agreement.items = counts.size();
    if (!counts.empty()) {
      try {
        agreement.fleiss_kappa = fleiss_kappa(counts, 3);
      } catch (const DegenerateAgreement&) {
      }
    }
    if (counts.size() >= 2) {
      agreement.pearson = pearson_pairwise(by_annotator[0], by_annotator[1],
                                           by_annotator[2]);
    }
    report.categories.push_back(std::move(agreement));
  }
  return report;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

int parse_level(const std::string& field, std::size_t line) {
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw MalformedAnnotation("line " + std::to_string(line) +
                              ": rating is not an integer: '" + field + "'");
  }
  return value;
}

}  // namespace

std::vector<AnnotationRecord> read_annotations_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open annotations file: " + path);
  std::vector<AnnotationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (line_no == 1 && !fields.empty() && fields[0] == "doc_id") continue;
    if (fields.size() != 5) {
      throw MalformedAnnotation("line " + std::to_string(line_no) +
                                ": expected 5 fields");
    }
    AnnotationRecord r;
    r.doc_id = fields[0];
    r.category = fields[1];
    for (std::size_t a = 0; a < 3; ++a) {
      r.ratings[a] = parse_level(fields[2 + a], line_no);
    }
    validate(r);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<AnnotationRecord> annotations_from_documents(
    std::span<const RawDocument> documents) {
  std::vector<AnnotationRecord> records;
  for (const auto& doc : documents) {
    for (const auto& [category, ratings] : doc.ratings) {
      AnnotationRecord r{doc.id, category, ratings};
      validate(r);
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace topicrate
