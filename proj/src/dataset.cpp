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

#include "axai/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <iterator>
#include <numeric>
#include <optional>
#include <ostream>

#include "axai/random.hpp"

namespace axai {

namespace {

constexpr std::array<std::string_view, 7> kColumns = {
    "day", "interval", "detid", "flow", "occ", "speed", "city"};

enum Column : std::size_t { kDay, kInterval, kDetid, kFlow, kOcc, kSpeed, kCity };

// Splits CSV text into records of fields. Quoted fields may contain commas,
// doubled quotes and line breaks. Blank lines are skipped.
class CsvReader {
 public:
  CsvReader(std::string_view text, const ParseLimits& limits)
      : text_(text), limits_(limits) {}

  // Returns false at end of input.
  bool next(std::vector<std::string>& fields, std::size_t row) {
    fields.clear();
    while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r'))
      ++pos_;
    if (pos_ >= text_.size()) return false;

    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && field.empty() && !was_quoted) {
        quoted = was_quoted = true;
      } else if (c == ',') {
        push(fields, field);
        was_quoted = false;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      } else {
        field.push_back(c);
      }
      if (field.size() > limits_.max_field_bytes) {
        throw DataError(DataErrorCode::kLimitExceeded, row, "",
                        "field exceeds " +
                            std::to_string(limits_.max_field_bytes) + " bytes");
      }
    }
    if (quoted) {
      throw DataError(DataErrorCode::kTypeError, row, "",
                      "unterminated quoted field");
    }
    push(fields, field);
    return true;
  }

 private:
  static void push(std::vector<std::string>& fields, std::string& field) {
    fields.push_back(std::move(field));
    field.clear();
  }

  std::string_view text_;
  const ParseLimits& limits_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view text, std::size_t row, std::string_view column) {
  const std::string_view s = trim(text);
  if (s.empty()) {
    throw DataError(DataErrorCode::kTypeError, row, std::string(column),
                    "missing value");
  }
  double value = 0.0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw DataError(DataErrorCode::kTypeError, row, std::string(column),
                    "not a finite number: '" + std::string(s) + "'");
  }
  return value;
}

std::int64_t parse_integer(std::string_view text, std::size_t row,
                           std::string_view column) {
  const std::string_view s = trim(text);
  if (s.empty()) {
    throw DataError(DataErrorCode::kTypeError, row, std::string(column),
                    "missing value");
  }
  std::int64_t value = 0;
  const char* begin = s.data();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw DataError(DataErrorCode::kTypeError, row, std::string(column),
                    "not an integer: '" + std::string(s) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

void write_field(std::ostream& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

std::string_view to_string(DataErrorCode code) {
  switch (code) {
    case DataErrorCode::kMissingColumn: return "MissingColumn";
    case DataErrorCode::kTypeError: return "TypeError";
    case DataErrorCode::kRangeError: return "RangeError";
    case DataErrorCode::kEmptyInput: return "EmptyInput";
    case DataErrorCode::kInvalidFraction: return "InvalidFraction";
    case DataErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case DataErrorCode::kLimitExceeded: return "LimitExceeded";
  }
  return "Unknown";
}

namespace {

std::string describe(DataErrorCode code, std::size_t row,
                     const std::string& column, const std::string& detail) {
  std::string msg(to_string(code));
  if (row > 0) msg += " at row " + std::to_string(row);
  if (!column.empty()) msg += ", column '" + column + "'";
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

}  // namespace

DataError::DataError(DataErrorCode code, std::size_t row, std::string column,
                     const std::string& detail)
    : CodedError(code, describe(code, row, column, detail)),
      row_(row),
      column_(std::move(column)) {}

void validate_record(const TrafficRecord& r, std::size_t row) {
  auto fail = [row](std::string_view column, const std::string& detail) {
    throw DataError(DataErrorCode::kRangeError, row, std::string(column), detail);
  };
  if (r.day.empty()) fail("day", "missing value");
  if (r.interval < 0) fail("interval", "must be >= 0");
  if (r.detid.empty()) fail("detid", "missing value");
  if (!std::isfinite(r.flow) || r.flow < 0.0) fail("flow", "must be >= 0");
  if (!std::isfinite(r.occ) || r.occ < 0.0 || r.occ > 1.0) {
    fail("occ", "must lie in [0, 1], got " + format_real(r.occ));
  }
  if (!std::isfinite(r.speed) || r.speed < 0.0) fail("speed", "must be >= 0");
  if (r.city.empty()) fail("city", "missing value");
}

Dataset parse_csv(std::istream& source, const ParseLimits& limits,
                  std::string source_name) {
  std::string text;
  {
    char buf[1 << 16];
    while (source.read(buf, sizeof(buf)) || source.gcount() > 0) {
      text.append(buf, static_cast<std::size_t>(source.gcount()));
      if (text.size() > limits.max_bytes) {
        throw DataError(DataErrorCode::kLimitExceeded, 0, "",
                        "input exceeds " + std::to_string(limits.max_bytes) +
                            " bytes");
      }
    }
  }
  std::string_view view(text);
  if (view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);

  CsvReader reader(view, limits);
  std::vector<std::string> fields;
  if (!reader.next(fields, 0)) {
    throw DataError(DataErrorCode::kEmptyInput, 0, "", "no header row");
  }

  std::array<std::optional<std::size_t>, kColumns.size()> index;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    const std::string_view name = trim(fields[i]);
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
      if (name == kColumns[c] && !index[c]) index[c] = i;
    }
  }
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    if (!index[c]) {
      throw DataError(DataErrorCode::kMissingColumn, 0, std::string(kColumns[c]),
                      "header lacks required column");
    }
  }

  Dataset dataset;
  dataset.source = std::move(source_name);
  std::size_t row = 0;
  while (reader.next(fields, row + 1)) {
    ++row;
    if (row > limits.max_rows) {
      throw DataError(DataErrorCode::kLimitExceeded, row, "",
                      "more than " + std::to_string(limits.max_rows) + " rows");
    }
    auto cell = [&](Column c) -> std::string_view {
      const std::size_t i = *index[c];
      if (i >= fields.size()) {
        throw DataError(DataErrorCode::kTypeError, row, std::string(kColumns[c]),
                        "missing value");
      }
      return fields[i];
    };
    TrafficRecord record;
    record.day = std::string(trim(cell(kDay)));
    record.interval = parse_integer(cell(kInterval), row, kColumns[kInterval]);
    record.detid = std::string(trim(cell(kDetid)));
    record.flow = parse_real(cell(kFlow), row, kColumns[kFlow]);
    record.occ = parse_real(cell(kOcc), row, kColumns[kOcc]);
    record.speed = parse_real(cell(kSpeed), row, kColumns[kSpeed]);
    record.city = std::string(trim(cell(kCity)));
    validate_record(record, row);
    dataset.records.push_back(std::move(record));
  }
  if (dataset.records.empty()) {
    throw DataError(DataErrorCode::kEmptyInput, 0, "", "no data rows");
  }
  return dataset;
}

Dataset read_csv_file(const std::string& path, const ParseLimits& limits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open data file '" + path + "'");
  return parse_csv(in, limits, path);
}

void write_csv(std::ostream& sink, const Dataset& dataset) {
  sink << "day,interval,detid,flow,occ,speed,city\n";
  for (const TrafficRecord& r : dataset.records) {
    write_field(sink, r.day);
    sink << ',' << r.interval << ',';
    write_field(sink, r.detid);
    sink << ',' << format_real(r.flow) << ',' << format_real(r.occ) << ','
         << format_real(r.speed) << ',';
    write_field(sink, r.city);
    sink << '\n';
  }
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, double train_fraction,
                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw DataError(DataErrorCode::kInvalidFraction, 0, "",
                    "train fraction must lie in (0, 1), got " +
                        format_real(train_fraction));
  }
  if (dataset.empty()) {
    throw DataError(DataErrorCode::kEmptyInput, 0, "", "cannot split an empty dataset");
  }
  const std::size_t n = dataset.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[rng.uniform_index(i + 1)]);
  }
  const auto n_train = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * train_fraction));

  Dataset train;
  Dataset inference;
  train.source = dataset.source + "#train";
  inference.source = dataset.source + "#inference";
  train.records.reserve(n_train);
  inference.records.reserve(n - n_train);
  for (std::size_t k = 0; k < n; ++k) {
    (k < n_train ? train : inference).records.push_back(dataset.records[order[k]]);
  }
  return {std::move(train), std::move(inference)};
}

FeatureVector features_of(const TrafficRecord& record) {
  return FeatureVector{{static_cast<double>(record.interval), record.occ,
                        record.speed}};
}

FeatureMatrix feature_matrix(const Dataset& dataset) {
  FeatureMatrix matrix;
  matrix.reserve(dataset.size());
  for (const TrafficRecord& r : dataset.records) matrix.push_back(features_of(r));
  return matrix;
}

std::vector<double> flow_targets(const Dataset& dataset) {
  std::vector<double> y;
  y.reserve(dataset.size());
  for (const TrafficRecord& r : dataset.records) y.push_back(r.flow);
  return y;
}

StatsTable feature_stats(const FeatureMatrix& matrix) {
  if (matrix.empty()) {
    throw DataError(DataErrorCode::kEmptyMatrix, 0, "",
                    "statistics need at least one row");
  }
  // Welford's single-pass update.
  StatsTable stats;
  std::array<double, kNumFeatures> m2{};
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    stats[j].min = stats[j].max = matrix.front()[j];
  }
  double count = 0.0;
  for (const FeatureVector& row : matrix) {
    count += 1.0;
    for (std::size_t j = 0; j < kNumFeatures; ++j) {
      const double x = row[j];
      const double delta = x - stats[j].mean;
      stats[j].mean += delta / count;
      m2[j] += delta * (x - stats[j].mean);
      stats[j].min = std::min(stats[j].min, x);
      stats[j].max = std::max(stats[j].max, x);
    }
  }
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    stats[j].stddev = std::sqrt(std::max(0.0, m2[j] / count));
  }
  return stats;
}

}  // namespace axai
