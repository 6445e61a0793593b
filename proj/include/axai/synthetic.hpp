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

#ifndef AXAI_SYNTHETIC_HPP_
#define AXAI_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>

#include "axai/dataset.hpp"

namespace axai {

// Deterministic UTD19-shaped traffic readings for demos and tests.
// Occupancy follows a two-peak daily profile, speed falls with occupancy and
// flow follows speed times occupancy, each with seeded noise. Values are
// rounded (occ to 4 decimals, speed to 0.1 km/h, flow to whole vehicles)
// so that write_csv/parse_csv reproduce them exactly.
Dataset synthetic_utd19(std::size_t n_rows, std::uint64_t seed);

}  // namespace axai

#endif  // AXAI_SYNTHETIC_HPP_
