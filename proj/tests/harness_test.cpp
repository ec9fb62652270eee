/* Copyright 2026 The DLA Toolkit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dla/harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "dla/fixtures.hpp"
#include "dla/png_io.hpp"
#include "test_util.hpp"

namespace dla {
namespace {

namespace fs = std::filesystem;

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dla_harness_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }

  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

// Strips the trailing wall_ms column from every CSV line.
std::string WithoutWallMs(const std::string& csv) {
  std::istringstream in(csv);
  std::string out;
  std::string line;
  while (std::getline(in, line)) {
    out += line.substr(0, line.rfind(','));
    out += '\n';
  }
  return out;
}

BenchmarkConfig SmallConfig() {
  BenchmarkConfig config;
  config.oracle = "threshold";
  config.classes = 10;
  config.attacks = {"dla"};
  config.budgets = {12};
  config.epsilons = {8};
  config.seeds = {0, 1, 2};
  return config;
}

std::vector<Sample> SmallSamples(int count, int size) {
  std::vector<Sample> samples;
  for (int i = 0; i < count; ++i) {
    samples.push_back(
        {"sample_" + std::to_string(i), MakeFixtureImage(i, size), {}});
  }
  return samples;
}

TEST_F(HarnessTest, LoadsImagesInFilenameOrder) {
  WriteFixtureSet(dir_.string(), 3, 16);
  const DatasetLoadResult result = LoadDataset((dir_ / "images").string(),
                                               (dir_ / "labels").string());
  ASSERT_EQ(result.samples.size(), 3u);
  EXPECT_EQ(result.samples[0].id, "fixture_000");
  EXPECT_EQ(result.samples[1].id, "fixture_001");
  EXPECT_EQ(result.samples[2].id, "fixture_002");
  EXPECT_TRUE(result.skipped.empty());
  for (const Sample& sample : result.samples) {
    EXPECT_EQ(sample.image.channels(), 3);
    EXPECT_EQ(sample.image.height(), 16);
    ASSERT_TRUE(sample.ground_truth.has_value());
    EXPECT_EQ(sample.ground_truth->height(), 16);
  }
}

TEST_F(HarnessTest, NormalizesBytesTo01) {
  Image image(3, 1, 2);
  image.at(0, 0, 0) = 1.0;  // (255, 0, 0) once encoded
  WriteImagePng((dir_ / "px.png").string(), image);
  const DatasetLoadResult result = LoadDataset(dir_.string());
  ASSERT_EQ(result.samples.size(), 1u);
  EXPECT_DOUBLE_EQ(result.samples[0].image.at(0, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(result.samples[0].image.at(1, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(result.samples[0].image.at(2, 0, 1), 0.0);
}

TEST_F(HarnessTest, LabelBytesAreClassIds) {
  LabelMap labels(2, 2, 8);
  labels.at(0, 1) = 7;
  WriteLabelsPng((dir_ / "labels.png").string(), labels);
  const LabelMap loaded = ReadLabelsPng((dir_ / "labels.png").string());
  EXPECT_EQ(loaded.at(0, 1), 7);
  EXPECT_EQ(loaded.num_classes(), 8);
}

TEST_F(HarnessTest, SkipsUndecodableFilesWithARecord) {
  WriteFixtureSet(dir_.string(), 2, 16);
  std::ofstream bad(dir_ / "images" / "broken.png");
  bad << "not a png";
  bad.close();
  const DatasetLoadResult result = LoadDataset((dir_ / "images").string());
  EXPECT_EQ(result.samples.size(), 2u);
  ASSERT_EQ(result.skipped.size(), 1u);
  EXPECT_EQ(result.skipped[0], "broken.png");
}

TEST_F(HarnessTest, EmptyDatasetIsRejected) {
  fs::create_directories(dir_ / "empty");
  EXPECT_THROW(LoadDataset((dir_ / "empty").string()), std::invalid_argument);
}

TEST_F(HarnessTest, RowCardinalityIsSeedsPlusMean) {
  const ResultTable table = RunBenchmark(SmallConfig(), SmallSamples(2, 16));
  ASSERT_EQ(table.rows.size(), 4u);  // 3 seed rows + 1 mean row
  EXPECT_EQ(table.rows[0].seed, "0");
  EXPECT_EQ(table.rows[3].seed, "mean");
  for (const ResultRow& row : table.rows) {
    EXPECT_FALSE(row.failed);
    EXPECT_LE(row.mean_queries, row.budget + 1);
  }
}

TEST_F(HarnessTest, CleanRowReportsTheUnattackedProxy) {
  BenchmarkConfig config = SmallConfig();
  config.budgets = {0};
  const ResultTable table = RunBenchmark(config, SmallSamples(2, 16));
  for (const ResultRow& row : table.rows) {
    EXPECT_DOUBLE_EQ(row.mean_proxy, 1.0);  // clean prediction vs itself
    EXPECT_DOUBLE_EQ(row.mean_queries, row.seed == "mean" ? 1.0 : 1.0);
  }
}

TEST_F(HarnessTest, CsvIsDeterministicModuloWallTime) {
  const auto samples = SmallSamples(2, 16);
  const std::string a = ToCsv(RunBenchmark(SmallConfig(), samples));
  const std::string b = ToCsv(RunBenchmark(SmallConfig(), samples));
  EXPECT_EQ(WithoutWallMs(a), WithoutWallMs(b));
}

TEST_F(HarnessTest, SampleOrderDoesNotChangePerSampleResults) {
  auto samples = SmallSamples(3, 16);
  const ResultTable forward = RunBenchmark(SmallConfig(), samples);
  std::reverse(samples.begin(), samples.end());
  const ResultTable reversed = RunBenchmark(SmallConfig(), samples);

  auto by_id = [](const ResultRow& row) {
    std::map<std::string, double> out;
    for (const SampleRun& run : row.samples) out[run.id] = run.final_proxy;
    return out;
  };
  ASSERT_EQ(forward.rows.size(), reversed.rows.size());
  for (std::size_t i = 0; i < forward.rows.size(); ++i) {
    EXPECT_EQ(by_id(forward.rows[i]), by_id(reversed.rows[i]));
  }
}

TEST_F(HarnessTest, CsvShapes) {
  const ResultTable empty;
  EXPECT_EQ(ToCsv(empty),
            "attack,budget,epsilon,seed,mean_proxy,mean_queries,wall_ms\n");

  ResultTable one;
  ResultRow row;
  row.attack = "dla";
  row.budget = 50;
  row.epsilon = 8;
  row.seed = "0";
  row.mean_proxy = 0.25;
  row.mean_queries = 51;
  row.wall_ms = 10.0;
  one.rows.push_back(row);
  const std::string csv = ToCsv(one);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_NE(csv.find("dla,50,8,0,0.250000000,51.000000,"), std::string::npos);
}

TEST_F(HarnessTest, TracesJsonRoundTripsLosslessly) {
  BenchmarkConfig config = SmallConfig();
  config.seeds = {0};
  const ResultTable table = RunBenchmark(config, SmallSamples(2, 16));
  const std::string payload = ToTracesJson(table);
  const nlohmann::json doc = nlohmann::json::parse(payload);

  ASSERT_EQ(doc.at("rows").size(), 1u);
  const auto& row = doc.at("rows")[0];
  ASSERT_EQ(row.at("samples").size(), 2u);
  for (std::size_t s = 0; s < 2; ++s) {
    const SampleRun& run = table.rows[0].samples[s];
    const auto& sample = row.at("samples")[s];
    EXPECT_EQ(sample.at("id").get<std::string>(), run.id);
    EXPECT_EQ(sample.at("queries").get<int>(), run.queries);
    EXPECT_EQ(sample.at("final_proxy").get<double>(), run.final_proxy);
    const auto& trace = sample.at("trace");
    ASSERT_EQ(trace.size(), run.trace.size());
    for (std::size_t t = 0; t < run.trace.size(); ++t) {
      EXPECT_EQ(trace[t][0].get<int>(), run.trace[t].query);
      EXPECT_EQ(trace[t][1].get<double>(), run.trace[t].best);
    }
  }
}

TEST_F(HarnessTest, MarkdownMirrorsBudgetColumns) {
  BenchmarkConfig config = SmallConfig();
  config.attacks = {"dla", "random"};
  config.budgets = {4, 12};
  const ResultTable table = RunBenchmark(config, SmallSamples(1, 16));
  const std::string markdown = ToMarkdown(table);
  EXPECT_NE(markdown.find("## epsilon 8/255"), std::string::npos);
  EXPECT_NE(markdown.find("| attack | budget 4 | budget 12 |"),
            std::string::npos);
  EXPECT_NE(markdown.find("| dla |"), std::string::npos);
  EXPECT_NE(markdown.find("| random |"), std::string::npos);
}

TEST_F(HarnessTest, ExportValidatesFormatAndPath) {
  const ResultTable table;
  EXPECT_THROW(ExportTable(table, "xml", (dir_ / "t.xml").string()),
               std::invalid_argument);
  EXPECT_THROW(ExportTable(table, "csv", (dir_ / "nodir" / "t.csv").string()),
               IoError);
  ExportTable(table, "csv", (dir_ / "t.csv").string());
  EXPECT_TRUE(fs::exists(dir_ / "t.csv"));
}

TEST_F(HarnessTest, TransportFailureMarksRowsFailedButContinues) {
  BenchmarkConfig config = SmallConfig();
  config.oracle = "cmd:false";  // dies instantly; every cell fails
  config.seeds = {0};
  const ResultTable table = RunBenchmark(config, SmallSamples(1, 16));
  ASSERT_EQ(table.rows.size(), 2u);
  EXPECT_TRUE(table.rows[0].failed);
  EXPECT_FALSE(table.rows[0].error.empty());
  EXPECT_TRUE(table.AnyFailed());
  const std::string csv = ToCsv(table);
  EXPECT_NE(csv.find("nan"), std::string::npos);
}

TEST_F(HarnessTest, ConfigValidation) {
  BenchmarkConfig config = SmallConfig();
  config.attacks = {};
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  config.attacks = {"square"};
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  config.epsilons = {300};
  EXPECT_THROW(config.Validate(), std::invalid_argument);
  config = SmallConfig();
  EXPECT_THROW(SweepEpsilon(config, SmallSamples(1, 16)),
               std::invalid_argument);
}

TEST_F(HarnessTest, GroundTruthModeNeedsLabels) {
  BenchmarkConfig config = SmallConfig();
  config.reference = ReferenceMode::kGroundTruth;
  EXPECT_THROW(RunBenchmark(config, SmallSamples(1, 16)),
               std::invalid_argument);
}

TEST_F(HarnessTest, StudyProxyReportsBothArmsInMiou) {
  BenchmarkConfig config = SmallConfig();
  config.budgets = {6};
  config.seeds = {0};
  const ResultTable table = StudyProxy(config, SmallSamples(2, 16));
  ASSERT_EQ(table.rows.size(), 4u);  // two arms x (seed + mean)
  EXPECT_EQ(table.rows[0].attack, "random:miou");
  EXPECT_EQ(table.rows[2].attack, "random:pacc");
  for (const ResultRow& row : table.rows) {
    EXPECT_GE(row.mean_proxy, 0.0);
    EXPECT_LE(row.mean_proxy, 1.0);
  }
}

TEST_F(HarnessTest, StudyNoiseTypePairsTheTwoArms) {
  BenchmarkConfig config = SmallConfig();
  config.budgets = {6};
  config.seeds = {0, 1};
  const ResultTable table = StudyNoiseType(config, SmallSamples(2, 16));
  ASSERT_EQ(table.rows.size(), 6u);  // two arms x (2 seeds + mean)
  EXPECT_EQ(table.rows[0].attack, "random");
  EXPECT_EQ(table.rows[3].attack, "dla-explore");
}

TEST_F(HarnessTest, SweepIsOrderedByEpsilon) {
  BenchmarkConfig config = SmallConfig();
  config.budgets = {4};
  config.seeds = {0};
  config.epsilons = {4, 8, 16};
  const ResultTable table = SweepEpsilon(config, SmallSamples(1, 16));
  ASSERT_EQ(table.rows.size(), 6u);
  EXPECT_EQ(table.rows[0].epsilon, 4);
  EXPECT_EQ(table.rows[2].epsilon, 8);
  EXPECT_EQ(table.rows[4].epsilon, 16);
}

TEST(WorkerCountTest, EnvOverrides) {
  ::setenv("DLA_WORKERS", "3", 1);
  EXPECT_EQ(WorkerCount(), 3);
  ::setenv("DLA_WORKERS", "0", 1);
  EXPECT_GE(WorkerCount(), 1);
  ::unsetenv("DLA_WORKERS");
  EXPECT_GE(WorkerCount(), 1);
}

}  // namespace
}  // namespace dla
