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

// Writes a synthetic UTD19-schema CSV: make_fixture <rows> <seed> <out.csv>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "axai/dataset.hpp"
#include "axai/synthetic.hpp"

int main(int argc, char** argv) {
  if (argc != 4) {
    std::cerr << "usage: make_fixture <rows> <seed> <out.csv>\n";
    return 2;
  }
  const auto rows = std::stoull(argv[1]);
  const auto seed = std::stoull(argv[2]);
  std::ofstream out(argv[3], std::ios::binary | std::ios::trunc);
  if (!out) {
    std::cerr << "cannot write " << argv[3] << '\n';
    return 1;
  }
  axai::write_csv(out, axai::synthetic_utd19(rows, seed));
  return 0;
}
