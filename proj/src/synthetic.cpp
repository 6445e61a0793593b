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

#include "axai/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "axai/random.hpp"

namespace axai {

Dataset synthetic_utd19(std::size_t n_rows, std::uint64_t seed) {
  static constexpr std::array<std::string_view, 3> kCities = {"london", "paris", "zurich"};
  static constexpr std::size_t kDetectorsPerCity = 8;

  Rng rng(seed);
  Dataset d;
  d.source = "synthetic:" + std::to_string(seed);
  d.records.reserve(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const std::size_t city = rng.uniform_index(kCities.size());
    const std::size_t detector = rng.uniform_index(kDetectorsPerCity);
    const std::int64_t slot = static_cast<std::int64_t>(rng.uniform_index(288));
    const double hour = static_cast<double>(slot) / 12.0;
    const double peak = std::exp(-std::pow((hour - 8.0) / 1.5, 2.0)) +
                        0.8 * std::exp(-std::pow((hour - 17.5) / 2.0, 2.0));
    const double site = 0.6 + 0.1 * static_cast<double>(detector % 5);

    double occ = 0.03 + 0.35 * peak * site + 0.03 * rng.normal();
    occ = std::round(std::clamp(occ, 0.0, 1.0) * 1e4) / 1e4;
    double speed = 95.0 * (1.0 - 1.6 * occ) + 5.0 * rng.normal();
    speed = std::round(std::max(5.0, speed) * 10.0) / 10.0;
    double flow = 38.0 * occ * speed * 3.0 + 40.0 * rng.normal();
    flow = std::round(std::max(0.0, flow));

    TrafficRecord r;
    r.day = "2017-05-0" + std::to_string(1 + rng.uniform_index(9));
    r.interval = slot * 300;
    r.detid = std::string(kCities[city].substr(0, 3)) + "-" + std::to_string(100 + detector);
    r.flow = flow;
    r.occ = occ;
    r.speed = speed;
    r.city = std::string(kCities[city]);
    d.records.push_back(std::move(r));
  }
  return d;
}

}  // namespace axai
