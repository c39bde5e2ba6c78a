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

#ifndef TOPICRATE_ANNOTATIONS_H_
#define TOPICRATE_ANNOTATIONS_H_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "topicrate/corpus.h"

namespace topicrate {

// Content categories, in reporting order.
inline const std::array<std::string, 3> kCategories = {"sex", "drugs",
                                                       "violence"};
// Rating levels that produce a category label (1 = None produces none).
inline constexpr std::array<int, 3> kLabelLevels = {2, 3, 4};

using LabelSet = std::set<std::string>;
using LabelSets = std::map<std::string, LabelSet>;

// "category:level".
std::string category_label(std::string_view category, int level);

// "appropriate" followed by category:level for every category and level
// 2-4: the ten labels of the standard PLDA layout.
std::vector<std::string> standard_labels();

// Three annotators' levels (1 None, 2 PG, 3 Mature, 4 Adult) for one
// document and category.
struct AnnotationRecord {
  std::string doc_id;
  std::string category;
  std::array<int, 3> ratings{};

  friend bool operator==(const AnnotationRecord&,
                         const AnnotationRecord&) = default;
};

// Throws MalformedAnnotation on unknown categories or levels outside [1,4].
void validate(const AnnotationRecord& record);

// Fleiss' kappa. item_counts[i][c] is how many of the `raters` raters put
// item i in category c. Throws DegenerateAgreement when the expected
// agreement is 1.
double fleiss_kappa(std::span<const std::vector<int>> item_counts, int raters);

// Pearson correlation; throws ZeroVariance when either side is constant.
double pearson(std::span<const double> x, std::span<const double> y);

// Correlations for annotator pairs (0,1), (0,2), (1,2); a pair with a
// constant side is nullopt.
std::array<std::optional<double>, 3> pearson_pairwise(
    std::span<const int> first, std::span<const int> second,
    std::span<const int> third);

enum class LabelMode {
  kConsensus,  // median of the three levels
  kUnion,      // every level any annotator gave
};

struct LabelSetOptions {
  LabelMode mode = LabelMode::kConsensus;
  // Attach "appropriate" to every document rather than only unlabeled ones.
  bool appropriate_on_all = false;
};

// Per-document label sets: category:level for every category whose level is
// at least 2; documents left without a label get {"appropriate"}.
LabelSets build_label_sets(std::span<const AnnotationRecord> annotations,
                           std::span<const std::string> all_doc_ids,
                           const LabelSetOptions& options = {});

// Mean of the three ratings, 1.0 for an unannotated category.
double average_rating(std::span<const AnnotationRecord> annotations,
                      std::string_view doc_id, std::string_view category);

// Index over records for repeated average lookups.
class RatingTable {
 public:
  explicit RatingTable(std::span<const AnnotationRecord> annotations);
  double average(std::string_view doc_id, std::string_view category) const;

 private:
  std::map<std::pair<std::string, std::string>, double, std::less<>> mean_;
};

struct CategoryAgreement {
  std::string category;
  std::size_t items = 0;
  std::optional<double> fleiss_kappa;  // nullopt when degenerate
  std::array<std::optional<double>, 3> pearson;
};

struct AgreementReport {
  std::vector<CategoryAgreement> categories;
};

AgreementReport agreement_report(std::span<const AnnotationRecord> annotations);

// CSV with columns doc_id, category, r1, r2, r3; an optional header row
// starting with "doc_id" is skipped.
std::vector<AnnotationRecord> read_annotations_csv(const std::string& path);

std::vector<AnnotationRecord> annotations_from_documents(
    std::span<const RawDocument> documents);

}  // namespace topicrate

#endif  // TOPICRATE_ANNOTATIONS_H_
