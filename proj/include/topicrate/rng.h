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

#ifndef TOPICRATE_RNG_H_
#define TOPICRATE_RNG_H_

#include <cstdint>
#include <random>
#include <vector>

namespace topicrate {

// Seedable generator whose output sequence is identical on every platform.
//
// The engine is std::mt19937_64, whose sequence is fixed by the standard.
// The standard library distributions are not (their algorithms are
// implementation-defined), so every derived variate is computed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 1) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint32_t below(std::uint32_t n);

  double normal();

  // Gamma(shape, 1) variate (Marsaglia-Tsang).
  double gamma(double shape);

  // Symmetric Dirichlet(alpha) draw of dimension n.
  std::vector<double> dirichlet(double alpha, std::size_t n);

  friend bool operator==(const Rng& a, const Rng& b) {
    return a.engine_ == b.engine_;
  }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from a base seed and a stream index
// (splitmix64 finalizer). Used for per-document and per-configuration seeds
// so results do not depend on iteration or thread order.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

}  // namespace topicrate

#endif  // TOPICRATE_RNG_H_
