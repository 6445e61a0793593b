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
#include <cmath>
#include <limits>
#include <sstream>

#include "axai/random.hpp"
#include "axai/synthetic.hpp"
#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace axai {
namespace {

Dataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

DataError parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const DataError& e) {
    return e;
  }
  ADD_FAILURE() << "expected DataError";
  return DataError(DataErrorCode::kEmptyInput, 0, "", "");
}

constexpr char kThreeRows[] =
    "day,interval,detid,flow,occ,speed,city\n"
    "2017-05-01,3600,det-1,420,0.2,50,london\n"
    "2017-05-01,3900,det-2,510.5,0.25,47.5,london\n"
    "2017-05-02,0,det-3,0,0,0,paris\n";

TEST(ParseCsv, ReadsThreeValidRows) {
  const Dataset d = parse(kThreeRows);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d.records[0].day, "2017-05-01");
  EXPECT_EQ(d.records[0].interval, 3600);
  EXPECT_EQ(d.records[0].detid, "det-1");
  EXPECT_EQ(d.records[0].flow, 420.0);
  EXPECT_EQ(d.records[1].occ, 0.25);
  EXPECT_EQ(d.records[1].speed, 47.5);
  EXPECT_EQ(d.records[2].city, "paris");
}

TEST(ParseCsv, MapsColumnsByHeaderNameAndIgnoresExtras) {
  const Dataset d = parse(
      "city,speed,extra,occ,flow,detid,interval,day\r\n"
      "zurich,61.5,ignored,0.1,300,z-9,7200,2017-05-03\r\n");
  ASSERT_EQ(d.size(), 1u);
  const TrafficRecord& r = d.records[0];
  EXPECT_EQ(r.city, "zurich");
  EXPECT_EQ(r.speed, 61.5);
  EXPECT_EQ(r.occ, 0.1);
  EXPECT_EQ(r.flow, 300.0);
  EXPECT_EQ(r.detid, "z-9");
  EXPECT_EQ(r.interval, 7200);
  EXPECT_EQ(r.day, "2017-05-03");
}

TEST(ParseCsv, HandlesQuotedFieldsAndBom) {
  const Dataset d = parse(
      "\xEF\xBB\xBF"
      "day,interval,detid,flow,occ,speed,city\n"
      "2017-05-01,60,\"det,\"\"A\"\"\",1,0.5,2,\"New\nYork\"\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.records[0].detid, "det,\"A\"");
  EXPECT_EQ(d.records[0].city, "New\nYork");
}

TEST(ParseCsv, EmptyStreamIsEmptyInput) {
  EXPECT_EQ(parse_error("").code(), DataErrorCode::kEmptyInput);
  EXPECT_EQ(parse_error("day,interval,detid,flow,occ,speed,city\n").code(),
            DataErrorCode::kEmptyInput);
}

TEST(ParseCsv, OccupancyAboveOneIsRangeError) {
  const DataError e = parse_error(
      "day,interval,detid,flow,occ,speed,city\n"
      "2017-05-01,0,d,1,0.5,2,x\n"
      "2017-05-01,0,d,1,1.5,2,x\n");
  EXPECT_EQ(e.code(), DataErrorCode::kRangeError);
  EXPECT_EQ(e.row(), 2u);
  EXPECT_EQ(e.column(), "occ");
  EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
}

TEST(ParseCsv, NegativeValuesAreRangeErrors) {
  for (const char* row : {"2017-05-01,-1,d,1,0.5,2,x", "2017-05-01,0,d,-1,0.5,2,x",
                          "2017-05-01,0,d,1,-0.1,2,x", "2017-05-01,0,d,1,0.5,-2,x"}) {
    const DataError e =
        parse_error(std::string("day,interval,detid,flow,occ,speed,city\n") + row + "\n");
    EXPECT_EQ(e.code(), DataErrorCode::kRangeError) << row;
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(ParseCsv, MissingColumnNamesIt) {
  const DataError e = parse_error("day,interval,detid,flow,speed,city\n"
                                  "2017-05-01,0,d,1,2,x\n");
  EXPECT_EQ(e.code(), DataErrorCode::kMissingColumn);
  EXPECT_EQ(e.column(), "occ");
}

TEST(ParseCsv, NonNumericIsTypeErrorWithRowAndColumn) {
  const DataError e = parse_error(
      "day,interval,detid,flow,occ,speed,city\n"
      "2017-05-01,0,d,1,0.5,2,x\n"
      "2017-05-01,0,d,1,0.5,fast,x\n");
  EXPECT_EQ(e.code(), DataErrorCode::kTypeError);
  EXPECT_EQ(e.row(), 2u);
  EXPECT_EQ(e.column(), "speed");
}

TEST(ParseCsv, RejectsMissingValuesInsteadOfImputing) {
  EXPECT_EQ(parse_error("day,interval,detid,flow,occ,speed,city\n"
                        "2017-05-01,0,d,,0.5,2,x\n")
                .column(),
            "flow");
  EXPECT_EQ(parse_error("day,interval,detid,flow,occ,speed,city\n"
                        "2017-05-01,0,,1,0.5,2,x\n")
                .column(),
            "detid");
  const DataError short_row = parse_error("day,interval,detid,flow,occ,speed,city\n"
                                          "2017-05-01,0,d,1,0.5\n");
  EXPECT_EQ(short_row.code(), DataErrorCode::kTypeError);
  EXPECT_EQ(short_row.column(), "speed");
}

TEST(ParseCsv, RejectsNonFiniteAndFractionalInterval) {
  EXPECT_EQ(parse_error("day,interval,detid,flow,occ,speed,city\n"
                        "2017-05-01,0,d,nan,0.5,2,x\n")
                .code(),
            DataErrorCode::kTypeError);
  EXPECT_EQ(parse_error("day,interval,detid,flow,occ,speed,city\n"
                        "2017-05-01,0.5,d,1,0.5,2,x\n")
                .column(),
            "interval");
}

TEST(ParseCsv, EnforcesLimits) {
  std::istringstream in(kThreeRows);
  ParseLimits limits;
  limits.max_rows = 2;
  try {
    parse_csv(in, limits);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.code(), DataErrorCode::kLimitExceeded);
  }
}

TEST(WriteCsv, RoundTripsSyntheticData) {
  for (std::uint64_t seed : {1u, 2u, 3u, 99u}) {
    const Dataset d = synthetic_utd19(200, seed);
    std::ostringstream out;
    write_csv(out, d);
    const Dataset back = parse(out.str());
    EXPECT_EQ(back.records, d.records) << "seed " << seed;

    std::ostringstream again;
    write_csv(again, back);
    EXPECT_EQ(again.str(), out.str());
  }
}

TEST(WriteCsv, QuotesAwkwardStrings) {
  Dataset d;
  d.records.push_back({"2017-05-01", 60, "a,\"b\"", 1.0, 0.5, 2.0, "x\ny"});
  std::ostringstream out;
  write_csv(out, d);
  EXPECT_EQ(parse(out.str()).records, d.records);
}

TEST(Split, FloorArithmetic) {
  const Dataset d = synthetic_utd19(10, 5);
  const auto [train, inference] = split(d, 0.8, 42);
  EXPECT_EQ(train.size(), 8u);
  EXPECT_EQ(inference.size(), 2u);
}

TEST(Split, Deterministic) {
  const Dataset d = synthetic_utd19(50, 5);
  const auto a = split(d, 0.7, 9);
  const auto b = split(d, 0.7, 9);
  EXPECT_EQ(a.first.records, b.first.records);
  EXPECT_EQ(a.second.records, b.second.records);
  const auto c = split(d, 0.7, 10);
  EXPECT_NE(a.first.records, c.first.records);
}

TEST(Split, MatchesReferenceFisherYates) {
  Dataset d;
  for (int i = 0; i < 5; ++i) {
    d.records.push_back({"2017-05-01", i * 300, "d" + std::to_string(i), 1.0, 0.1, 50.0, "x"});
  }
  const auto [train, inference] = split(d, 0.8, 42);
  const std::vector<std::size_t> order = testing::reference_shuffle(5, 42);
  ASSERT_EQ(train.size(), 4u);
  ASSERT_EQ(inference.size(), 1u);
  for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(train.records[k], d.records[order[k]]);
  EXPECT_EQ(inference.records[0], d.records[order[4]]);
}

TEST(Split, ReferenceShuffleAgreesAcrossSizes) {
  for (std::size_t n : {2u, 3u, 17u, 128u}) {
    Dataset d;
    for (std::size_t i = 0; i < n; ++i) {
      d.records.push_back({"x", static_cast<std::int64_t>(i), "d", 1.0, 0.1, 1.0, "c"});
    }
    const auto [train, inference] = split(d, 0.5, n * 7);
    const auto order = testing::reference_shuffle(n, n * 7);
    std::vector<std::int64_t> got, want;
    for (const auto& r : train.records) got.push_back(r.interval);
    for (const auto& r : inference.records) got.push_back(r.interval);
    for (std::size_t i : order) want.push_back(static_cast<std::int64_t>(i));
    EXPECT_EQ(got, want) << n;
  }
}

TEST(Split, PartitionsTheMultiset) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.uniform_index(60);
    const double fraction = 0.05 + 0.9 * rng.uniform01();
    const Dataset d = synthetic_utd19(n, trial);
    const auto [train, inference] = split(d, fraction, trial);
    ASSERT_EQ(train.size() + inference.size(), n);
    EXPECT_EQ(train.size(), static_cast<std::size_t>(std::floor(n * fraction)));
    std::vector<std::string> all, parts;
    auto key = [](const TrafficRecord& r) {
      return r.day + "|" + std::to_string(r.interval) + "|" + r.detid + "|" +
             std::to_string(r.flow) + "|" + std::to_string(r.occ) + "|" +
             std::to_string(r.speed) + "|" + r.city;
    };
    for (const auto& r : d.records) all.push_back(key(r));
    for (const auto& r : train.records) parts.push_back(key(r));
    for (const auto& r : inference.records) parts.push_back(key(r));
    std::sort(all.begin(), all.end());
    std::sort(parts.begin(), parts.end());
    EXPECT_EQ(all, parts);
  }
}

TEST(Split, RejectsFractionsOutsideOpenInterval) {
  const Dataset d = synthetic_utd19(10, 1);
  for (double f : {0.0, 1.0, -0.2, 1.5, std::numeric_limits<double>::quiet_NaN()}) {
    try {
      split(d, f, 1);
      ADD_FAILURE() << f;
    } catch (const DataError& e) {
      EXPECT_EQ(e.code(), DataErrorCode::kInvalidFraction);
    }
  }
}

TEST(FeatureMatrix, ProjectsInFixedOrder) {
  const Dataset d = parse(kThreeRows);
  const FeatureMatrix m = feature_matrix(d);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], (FeatureVector{{3600.0, 0.2, 50.0}}));
  EXPECT_EQ(m[1], (FeatureVector{{3900.0, 0.25, 47.5}}));
  EXPECT_EQ(m[2], (FeatureVector{{0.0, 0.0, 0.0}}));
  EXPECT_EQ(m[0].interval(), 3600.0);
  EXPECT_EQ(m[0].occ(), 0.2);
  EXPECT_EQ(m[0].speed(), 50.0);
}

TEST(FeatureMatrix, RowCountAlwaysMatches) {
  for (std::size_t n : {1u, 7u, 300u}) {
    EXPECT_EQ(feature_matrix(synthetic_utd19(n, n)).size(), n);
  }
}

TEST(FeatureStats, ConstantColumnHasZeroStd) {
  const FeatureMatrix m(3, FeatureVector{{1.0, 1.0, 1.0}});
  const StatsTable s = feature_stats(m);
  EXPECT_EQ(s[0].mean, 1.0);
  EXPECT_EQ(s[0].stddev, 0.0);
}

TEST(FeatureStats, TwoPointPopulationStd) {
  const FeatureMatrix m = {FeatureVector{{0.0, 0.0, 0.0}}, FeatureVector{{10.0, 10.0, 10.0}}};
  const StatsTable s = feature_stats(m);
  EXPECT_DOUBLE_EQ(s[0].mean, 5.0);
  EXPECT_DOUBLE_EQ(s[0].stddev, 5.0);
  EXPECT_EQ(s[0].min, 0.0);
  EXPECT_EQ(s[0].max, 10.0);
}

TEST(FeatureStats, MatchesTwoPassOracle) {
  const FeatureMatrix m = feature_matrix(synthetic_utd19(100, 77));
  const StatsTable s = feature_stats(m);
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    std::vector<double> column;
    for (const auto& row : m) column.push_back(row[j]);
    const testing::TwoPassStats want = testing::two_pass_stats(column);
    EXPECT_NEAR(s[j].mean, want.mean, 1e-9 * std::max(1.0, std::abs(want.mean)));
    EXPECT_NEAR(s[j].stddev, want.stddev, 1e-9 * std::max(1.0, want.stddev));
    EXPECT_EQ(s[j].min, want.min);
    EXPECT_EQ(s[j].max, want.max);
  }
}

TEST(FeatureStats, EmptyMatrixThrows) {
  try {
    feature_stats({});
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(e.code(), DataErrorCode::kEmptyMatrix);
  }
}

}  // namespace
}  // namespace axai
