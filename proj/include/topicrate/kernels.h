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

#ifndef TOPICRATE_KERNELS_H_
#define TOPICRATE_KERNELS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "topicrate/corpus.h"
#include "topicrate/matrix.h"

namespace topicrate {

class TopicModel;
struct InferenceConfig;

// Batch kernels over independent documents. kSerial is the reference
// implementation; kParallel splits documents across OpenMP threads. Both
// produce bit-identical results: per-document work is seeded by document
// index and reductions are done serially in document order.
enum class Execution { kSerial, kParallel };

// Number of distinct documents containing each id in [0, vocab_size).
std::vector<int32_t> document_frequencies(
    std::span<const std::vector<int32_t>> documents, std::size_t vocab_size,
    Execution execution);

// Fold-in theta for every document; document d uses seed
// derive_seed(config.seed, d).
Matrix infer_thetas(const TopicModel& model,
                    std::span<const Document> documents,
                    const InferenceConfig& config, Execution execution);

// sum_i log(sum_k theta(d,k) phi(k, w_di)) per document.
std::vector<double> log_likelihoods(const TopicModel& model,
                                    std::span<const Document> documents,
                                    const Matrix& thetas,
                                    Execution execution);

}  // namespace topicrate

#endif  // TOPICRATE_KERNELS_H_
