/*
 * Copyright 2026 The axai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AXAI_RANDOM_HPP_
#define AXAI_RANDOM_HPP_

#include <cstdint>
#include <optional>
#include <random>

namespace axai {

// Seeded generator with platform-independent derived distributions.
//
// The raw stream is std::mt19937_64, whose output sequence is fixed by the
// standard. The standard distributions are not, so the draws used for
// shuffling, bootstrapping and perturbation sampling are defined here:
//   uniform_index(n): rejection sampling, discard r < (2^64 - n) mod n,
//                     return r mod n.
//   uniform01():      top 53 bits of one draw, scaled by 2^-53.
//   normal():         Box-Muller over (1 - uniform01(), uniform01()),
//                     the sine branch is cached for the next call.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform_index(std::uint64_t bound);
  double uniform01();
  double normal();

 private:
  std::mt19937_64 engine_;
  std::optional<double> cached_normal_;
};

// SplitMix64 finalizer; derives independent per-stream seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace axai

#endif  // AXAI_RANDOM_HPP_
