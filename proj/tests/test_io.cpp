// Copyright 2026 the ucal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "support.hpp"
#include "ucal/ecdf.hpp"
#include "ucal/error.hpp"
#include "ucal/io.hpp"
#include "ucal/oracle_check.hpp"
#include "ucal/patching.hpp"
#include "ucal/serialize.hpp"

using namespace ucal;

TEST_CASE("prediction and label csv") {
  const auto m = io::parse_predictions_csv("0.5,0.5\n0.25, 0.75\r\n\n");
  CHECK(m.rows() == 2);
  CHECK(m(1, 1) == 0.75);
  CHECK(io::parse_predictions_csv("p0,p1\n1,0\n", true).rows() == 1);
  CHECK(io::parse_labels_csv("0\n2\n1\n") == std::vector<Label>{0, 2, 1});

  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const IoError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message([] { io::parse_predictions_csv("0.5,0.5\n0.5\n"); }).find("line 2") != std::string::npos);
  CHECK(message([] { io::parse_predictions_csv("0.5,abc\n"); }).find("line 1") != std::string::npos);
  CHECK(message([] { io::parse_labels_csv("0\n-1\n"); }).find("line 2") != std::string::npos);
  CHECK(message([] { io::parse_labels_csv("0\n1.5\n"); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(io::parse_predictions_csv(""), IoError);
  CHECK_THROWS_AS(io::parse_labels_csv(""), IoError);
  CHECK_THROWS_AS(io::read_text("/nonexistent/file.csv"), IoError);
}

TEST_CASE("csv output round trips to the bit") {
  const auto data = testing::random_dataset(1, 50, 4);
  const auto text = io::format_predictions_csv(data.probs());
  CHECK(io::parse_predictions_csv(text) == data.probs());
  CHECK(io::parse_labels_csv(io::format_labels_csv(data.labels())) ==
        std::vector<Label>(data.labels().begin(), data.labels().end()));
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(0.0) == "0");
}

TEST_CASE("utility json round trip") {
  SeedStream rng(2, StreamTag::Test, 50);
  for (int t = 0; t < 300; ++t) {
    const std::size_t C = 2 + rng.below(6);
    const auto spec = random_utility(C, rng);
    const auto j = utility_to_json(spec);
    CHECK(j.contains("family"));
    CHECK(j.contains("params"));
    CHECK(utility_from_json(parse_json(dump_json(j))) == spec);
  }
  CHECK(utility_to_json(family::ClassWise{2})["params"]["c"] == 2);
  CHECK(utility_to_json(family::TopK{1})["params"]["k"] == 1);
  CHECK_THROWS_AS(utility_from_json(parse_json(R"({"family":"nope","params":{}})")), DomainError);
  CHECK_THROWS_AS(utility_from_json(parse_json(R"({"family":"top_k","params":{"k":-1}})")), DomainError);
  CHECK_THROWS_AS(parse_json("{"), IoError);
}

TEST_CASE("distribution and patch sequence round trip") {
  const auto law = two_point_population();
  CHECK(distribution_from_json(parse_json(dump_json(distribution_to_json(law)))) == law);

  const auto data = testing::random_dataset(3, 300, 3);
  PatchConfig config;
  config.epsilon = 0.03;
  const auto seq = fit(data, config);
  const auto back = patch_sequence_from_json(parse_json(dump_json(patch_sequence_to_json(seq))));
  CHECK(back.num_classes == seq.num_classes);
  REQUIRE(back.records.size() == seq.records.size());
  for (std::size_t t = 0; t < seq.records.size(); ++t) {
    CHECK(back.records[t].spec == seq.records[t].spec);
    CHECK(back.records[t].lo == seq.records[t].lo);
    CHECK(back.records[t].hi == seq.records[t].hi);
    CHECK(back.records[t].sign == seq.records[t].sign);
    CHECK(back.records[t].step == seq.records[t].step);
  }
  CHECK(transform(data.probs(), back) == transform(data.probs(), seq));

  auto j = patch_sequence_to_json(seq);
  REQUIRE_FALSE(j["records"].empty());
  j["records"][0]["sign"] = 0;
  CHECK_THROWS_AS(patch_sequence_from_json(j), DomainError);
  j = patch_sequence_to_json(seq);
  j["records"][0]["lo"] = 1.0;
  j["records"][0]["hi"] = 0.0;
  CHECK_THROWS_AS(patch_sequence_from_json(j), DomainError);
}

TEST_CASE("report and ecdf encodings") {
  MetricReport report;
  report.uc["top_class"] = {0.2, 0.45, 0.45, -1};
  const auto j = report_to_json(report);
  CHECK(j["uc"]["top_class"]["sign"] == -1);
  CHECK_FALSE(report_to_json(MetricReport{}).contains("uc"));

  const auto data = testing::random_dataset(4, 100, 3);
  auto result = ecdf_evaluate(data, SampledFamily::Linear, 4, 1);
  result.delta = 0.05;
  result.band_halfwidth = dkw_band(4, 0.05);
  const auto csv = ecdf_csv(result);
  CHECK(csv.rfind("error,cdf\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(csv.substr(csv.size() - 3) == ",1\n");
  const auto side = ecdf_sidecar_json(result);
  CHECK(side["family"] == "linear");
  CHECK(side["M"] == 4);
  CHECK_FALSE(side.contains("utilities"));
}
