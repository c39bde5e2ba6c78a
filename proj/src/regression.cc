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

#include "topicrate/regression.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "topicrate/errors.h"
#include "topicrate/io.h"
#include "topicrate/rng.h"

namespace topicrate {

double RegressionModel::raw_prediction(std::span<const double> theta) const {
  if (theta.size() != weights.size()) {
    throw DimensionMismatch("theta length " + std::to_string(theta.size()) +
                            " != weight length " +
                            std::to_string(weights.size()));
  }
  double y = bias;
  for (std::size_t k = 0; k < weights.size(); ++k) y += weights[k] * theta[k];
  return y;
}

double predict_rating(const RegressionModel& model,
                      std::span<const double> theta) {
  return std::clamp(model.raw_prediction(theta), kMinRating, kMaxRating);
}

double regularized_loss(const RegressionModel& model, const Matrix& thetas,
                        std::span<const double> targets) {
  if (thetas.rows() != targets.size() || targets.empty()) {
    throw DimensionMismatch("thetas and targets differ in length");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double r = std::abs(targets[i] - model.raw_prediction(thetas.row(i)));
    loss += std::max(0.0, r - model.config.epsilon);
  }
  loss /= static_cast<double>(targets.size());
  double norm = 0.0;
  for (double w : model.weights) norm += w * w;
  return loss + 0.5 * model.config.l2 * norm;
}

RegressionModel train_regressor(const Matrix& thetas,
                                std::span<const double> targets,
                                const RegressionConfig& config,
                                std::string category) {
  if (thetas.rows() != targets.size()) {
    throw DimensionMismatch("thetas and targets differ in length");
  }
  if (targets.size() < 2) {
    throw InvalidArgument("regression needs at least two documents");
  }
  for (double y : targets) {
    if (!(y >= kMinRating && y <= kMaxRating)) {
      throw InvalidArgument("regression target outside [1,4]");
    }
  }
  if (config.epsilon < 0.0 || config.l2 < 0.0 || !(config.learning_rate > 0.0) ||
      config.epochs < 1) {
    throw InvalidArgument("invalid regression configuration");
  }

  RegressionModel model;
  model.category = std::move(category);
  model.config = config;
  model.weights.assign(thetas.cols(), 0.0);
  model.bias = std::accumulate(targets.begin(), targets.end(), 0.0) /
               static_cast<double>(targets.size());

  if (std::all_of(targets.begin(), targets.end(),
                  [&](double y) { return y == targets.front(); })) {
    model.bias = targets.front();
    model.degenerate_targets = true;
    return model;
  }

  RegressionModel best = model;
  double best_loss = regularized_loss(model, thetas, targets);
  Rng rng(config.seed);
  std::vector<std::size_t> order(targets.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double eta = config.learning_rate / std::sqrt(1.0 + epoch);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1],
                order[rng.below(static_cast<std::uint32_t>(i))]);
    }
    for (std::size_t i : order) {
      const auto x = thetas.row(i);
      const double residual = targets[i] - model.raw_prediction(x);
      // Subgradient of the tube loss with respect to the prediction.
      double g = 0.0;
      if (residual > config.epsilon) g = -1.0;
      else if (residual < -config.epsilon) g = 1.0;
      for (std::size_t k = 0; k < model.weights.size(); ++k) {
        model.weights[k] -= eta * (g * x[k] + config.l2 * model.weights[k]);
      }
      model.bias -= eta * g;
    }
    const double loss = regularized_loss(model, thetas, targets);
    if (loss < best_loss) {
      best_loss = loss;
      best = model;
    }
  }
  return best;
}

int rating_level(double target) {
  const int level = static_cast<int>(std::floor(target + 0.5));
  return std::clamp(level, 1, 4);
}

RegressionErrorReport weighted_abs_error(
    std::span<const double> predictions, std::span<const double> targets,
    const std::function<int(double)>& level_of) {
  if (predictions.size() != targets.size()) {
    throw DimensionMismatch("predictions and targets differ in length");
  }
  if (targets.empty()) throw EmptyInput("no predictions to score");
  RegressionErrorReport report;
  std::array<double, 4> sums{};
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const int level = level_of(targets[i]);
    if (level < 1 || level > 4) {
      throw InvalidArgument("rating level outside [1,4]");
    }
    sums[level - 1] += std::abs(predictions[i] - targets[i]);
    ++report.counts[level - 1];
  }
  double numerator = 0.0, denominator = 0.0;
  const double n = static_cast<double>(targets.size());
  for (int l = 0; l < 4; ++l) {
    if (report.counts[l] == 0) {
      report.empty_levels.push_back(l + 1);
      continue;
    }
    const double e = sums[l] / static_cast<double>(report.counts[l]);
    const double p = static_cast<double>(report.counts[l]) / n;
    report.level_error[l] = e;
    report.prevalence[l] = p;
    numerator += e / p;
    denominator += 1.0 / p;
  }
  report.weighted_average = numerator / denominator;
  return report;
}

nlohmann::ordered_json to_json(const RegressionModel& model) {
  nlohmann::ordered_json j;
  j["category"] = model.category;
  j["weights"] = model.weights;
  j["bias"] = model.bias;
  j["degenerate_targets"] = model.degenerate_targets;
  nlohmann::ordered_json c;
  c["loss"] = "epsilon_insensitive";
  c["epsilon"] = model.config.epsilon;
  c["l2"] = model.config.l2;
  c["learning_rate"] = model.config.learning_rate;
  c["schedule"] = "rate/sqrt(1+epoch)";
  c["epochs"] = model.config.epochs;
  c["seed"] = model.config.seed;
  j["config"] = std::move(c);
  return j;
}

RegressionModel regression_model_from_json(const nlohmann::json& j) {
  try {
    RegressionModel m;
    m.category = j.at("category").get<std::string>();
    m.weights = j.at("weights").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    m.degenerate_targets = j.value("degenerate_targets", false);
    const auto& c = j.at("config");
    m.config.epsilon = c.at("epsilon").get<double>();
    m.config.l2 = c.at("l2").get<double>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed regression model: ") + e.what());
  }
}

std::string error_report_csv_header() {
  return "category,n_topics,e_1,e_2,e_3,e_4,weighted_avg\n";
}

std::string error_report_csv_row(std::string_view category,
                                 std::size_t num_topics,
                                 const RegressionErrorReport& report) {
  std::string row = std::string(category) + "," + std::to_string(num_topics);
  for (const auto& e : report.level_error) row += "," + format_optional(e);
  row += "," + format_double(report.weighted_average) + "\n";
  return row;
}

}  // namespace topicrate
