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

#include "topicrate/kernels.h"

#include <cmath>

#include "topicrate/errors.h"
#include "topicrate/lda.h"
#include "topicrate/model.h"
#include "topicrate/rng.h"

namespace topicrate {
namespace {

void count_document(std::span<const int32_t> ids, int32_t* df,
                    std::vector<int32_t>& last_seen, int32_t doc) {
  for (int32_t id : ids) {
    if (last_seen[id] != doc) {
      last_seen[id] = doc;
      ++df[id];
    }
  }
}

double document_log_likelihood(const TopicModel& model,
                               std::span<const int32_t> tokens,
                               std::span<const double> theta) {
  const std::size_t k_count = model.num_topics();
  double sum = 0.0;
  for (int32_t w : tokens) {
    const auto weights = model.word_weights(w);
    double p = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) p += theta[k] * weights[k];
    sum += std::log(p);
  }
  return sum;
}

}  // namespace

std::vector<int32_t> document_frequencies(
    std::span<const std::vector<int32_t>> documents, std::size_t vocab_size,
    Execution execution) {
  std::vector<int32_t> df(vocab_size, 0);
  const auto n = static_cast<std::int64_t>(documents.size());
  if (execution == Execution::kSerial) {
    std::vector<int32_t> last_seen(vocab_size, -1);
    for (std::int64_t d = 0; d < n; ++d) {
      count_document(documents[d], df.data(), last_seen,
                     static_cast<int32_t>(d));
    }
    return df;
  }
#pragma omp parallel
  {
    std::vector<int32_t> local(vocab_size, 0);
    std::vector<int32_t> last_seen(vocab_size, -1);
#pragma omp for schedule(static) nowait
    for (std::int64_t d = 0; d < n; ++d) {
      count_document(documents[d], local.data(), last_seen,
                     static_cast<int32_t>(d));
    }
    // Integer sums are order independent.
#pragma omp critical(topicrate_doc_freq)
    for (std::size_t w = 0; w < vocab_size; ++w) df[w] += local[w];
  }
  return df;
}

Matrix infer_thetas(const TopicModel& model,
                    std::span<const Document> documents,
                    const InferenceConfig& config, Execution execution) {
  Matrix thetas(documents.size(), model.num_topics());
  const auto n = static_cast<std::int64_t>(documents.size());
  auto one = [&](std::int64_t d) {
    InferenceConfig local = config;
    local.seed = derive_seed(config.seed, static_cast<std::uint64_t>(d));
    const std::vector<double> theta =
        infer_theta(model, documents[d].tokens, local);
    std::copy(theta.begin(), theta.end(), thetas.row(d).begin());
  };
  if (execution == Execution::kSerial) {
    for (std::int64_t d = 0; d < n; ++d) one(d);
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t d = 0; d < n; ++d) one(d);
  }
  return thetas;
}

std::vector<double> log_likelihoods(const TopicModel& model,
                                    std::span<const Document> documents,
                                    const Matrix& thetas,
                                    Execution execution) {
  if (thetas.rows() != documents.size() ||
      thetas.cols() != model.num_topics()) {
    throw DimensionMismatch("theta table does not match documents/topics");
  }
  std::vector<double> out(documents.size(), 0.0);
  const auto n = static_cast<std::int64_t>(documents.size());
  if (execution == Execution::kSerial) {
    for (std::int64_t d = 0; d < n; ++d) {
      out[d] = document_log_likelihood(model, documents[d].tokens,
                                       thetas.row(d));
    }
  } else {
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t d = 0; d < n; ++d) {
      out[d] = document_log_likelihood(model, documents[d].tokens,
                                       thetas.row(d));
    }
  }
  return out;
}

}  // namespace topicrate
