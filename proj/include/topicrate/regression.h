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

#ifndef TOPICRATE_REGRESSION_H_
#define TOPICRATE_REGRESSION_H_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "topicrate/matrix.h"

namespace topicrate {

inline constexpr double kMinRating = 1.0;
inline constexpr double kMaxRating = 4.0;

struct RegressionConfig {
  double epsilon = 0.1;        // half-width of the insensitive tube
  double l2 = 1e-4;            // weight decay (bias is not regularized)
  double learning_rate = 0.1;  // step at epoch e is rate / sqrt(1 + e)
  int epochs = 200;
  std::uint64_t seed = 1;
};

// Linear rating predictor y = w . theta + b for one content category.
struct RegressionModel {
  std::string category;
  std::vector<double> weights;
  double bias = 0.0;
  RegressionConfig config;
  // Set when every training target was equal; the model is then constant.
  bool degenerate_targets = false;

  double raw_prediction(std::span<const double> theta) const;
};

// Epsilon-insensitive linear regression fit by stochastic subgradient
// descent with L2 weight decay, starting from zero weights and the mean
// target as bias. Samples are visited in a seeded random order each epoch;
// the iterate with the lowest regularized objective seen at an epoch
// boundary (including the start) is returned.
RegressionModel train_regressor(const Matrix& thetas,
                                std::span<const double> targets,
                                const RegressionConfig& config,
                                std::string category = {});

// mean max(0, |y - f(x)| - epsilon) + l2/2 |w|^2, with f unclamped.
double regularized_loss(const RegressionModel& model, const Matrix& thetas,
                        std::span<const double> targets);

// w . theta + b clamped to [1,4]. Throws DimensionMismatch.
double predict_rating(const RegressionModel& model,
                      std::span<const double> theta);

struct RegressionErrorReport {
  // Index l-1 holds rating level l.
  std::array<std::optional<double>, 4> level_error;
  std::array<double, 4> prevalence{};
  std::array<std::size_t, 4> counts{};
  // sum(e_l / p_l) / sum(1 / p_l) over non-empty levels.
  double weighted_average = 0.0;
  std::vector<int> empty_levels;
};

// Round half up, clamped to [1,4].
int rating_level(double target);

// Buckets documents by level_of(target) and reports the mean absolute error
// per level and the inverse-prevalence weighted average. Throws EmptyInput.
RegressionErrorReport weighted_abs_error(
    std::span<const double> predictions, std::span<const double> targets,
    const std::function<int(double)>& level_of = rating_level);

nlohmann::ordered_json to_json(const RegressionModel& model);
RegressionModel regression_model_from_json(const nlohmann::json& j);

// category, n_topics, e_1..e_4, weighted_avg
std::string error_report_csv_header();
std::string error_report_csv_row(std::string_view category,
                                 std::size_t num_topics,
                                 const RegressionErrorReport& report);

}  // namespace topicrate

#endif  // TOPICRATE_REGRESSION_H_
