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

#ifndef AXAI_DATASET_HPP_
#define AXAI_DATASET_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "axai/error.hpp"

namespace axai {

// One row of UTD19-schema loop-detector data.
struct TrafficRecord {
  std::string day;
  std::int64_t interval = 0;  // seconds since midnight
  std::string detid;
  double flow = 0.0;   // vehicles per hour
  double occ = 0.0;    // fraction in [0, 1]
  double speed = 0.0;  // km/h
  std::string city;

  friend bool operator==(const TrafficRecord&, const TrafficRecord&) = default;
};

struct Dataset {
  std::vector<TrafficRecord> records;
  std::string source;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

inline constexpr std::size_t kNumFeatures = 3;
inline constexpr std::array<std::string_view, kNumFeatures> kFeatureNames = {
    "interval", "occ", "speed"};

enum class Feature : std::size_t { kInterval = 0, kOcc = 1, kSpeed = 2 };

// Model input in the fixed order (interval, occ, speed).
struct FeatureVector {
  std::array<double, kNumFeatures> values{};

  double interval() const { return values[0]; }
  double occ() const { return values[1]; }
  double speed() const { return values[2]; }

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  double operator[](Feature f) const {
    return values[static_cast<std::size_t>(f)];
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

using FeatureMatrix = std::vector<FeatureVector>;

struct FeatureStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const FeatureStats&, const FeatureStats&) = default;
};

using StatsTable = std::array<FeatureStats, kNumFeatures>;

enum class DataErrorCode {
  kMissingColumn,
  kTypeError,
  kRangeError,
  kEmptyInput,
  kInvalidFraction,
  kEmptyMatrix,
  kLimitExceeded,
};

std::string_view to_string(DataErrorCode code);

// Parse and validation failures. `row` is the 1-based data row (the header
// is row 0); `column` is the header name. Both are empty/zero when the error
// is not tied to a cell.
class DataError : public CodedError<DataErrorCode> {
 public:
  DataError(DataErrorCode code, std::size_t row, std::string column,
            const std::string& detail);

  std::size_t row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  std::size_t row_;
  std::string column_;
};

struct ParseLimits {
  std::size_t max_bytes = std::size_t{1} << 31;
  std::size_t max_rows = 50'000'000;
  std::size_t max_field_bytes = 4096;
};

// Reads RFC-4180 CSV with a header row. Columns are matched by header name,
// extra columns are ignored, a leading UTF-8 BOM is skipped.
Dataset parse_csv(std::istream& source, const ParseLimits& limits = {},
                  std::string source_name = "<stream>");
Dataset read_csv_file(const std::string& path, const ParseLimits& limits = {});

// Writes day,interval,detid,flow,occ,speed,city with reals at 6 significant
// digits. Output is byte-deterministic.
void write_csv(std::ostream& sink, const Dataset& dataset);

// Throws DataError(kRangeError/kTypeError) naming `row` on the first
// violated invariant.
void validate_record(const TrafficRecord& record, std::size_t row);

// Seeded Fisher-Yates over row indices (Rng::uniform_index), then the first
// floor(n * train_fraction) shuffled rows form the training set and the
// rest, in shuffled order, the inference set.
std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed);

FeatureVector features_of(const TrafficRecord& record);
FeatureMatrix feature_matrix(const Dataset& dataset);
std::vector<double> flow_targets(const Dataset& dataset);

StatsTable feature_stats(const FeatureMatrix& matrix);

}  // namespace axai

#endif  // AXAI_DATASET_HPP_
