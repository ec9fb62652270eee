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
#ifndef DLA_HARNESS_H_
#define DLA_HARNESS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dla/attack.hpp"
#include "dla/metrics.hpp"
#include "dla/oracle.hpp"
#include "dla/types.hpp"

namespace dla {

struct Sample {
  std::string id;
  Image image;
  std::optional<LabelMap> ground_truth;
};

struct DatasetLoadResult {
  std::vector<Sample> samples;
  std::vector<std::string> skipped;  // undecodable or mismatched files
};

// Loads 8-bit RGB PNGs (values normalized to [0, 1]) in lexicographic
// filename order; when labels_dir is given, pairs each image with the
// grayscale label PNG of the same filename. Undecodable files are skipped
// and recorded; an empty result is an error.
DatasetLoadResult LoadDataset(const std::string& images_dir,
                              const std::string& labels_dir = "");

struct BenchmarkConfig {
  std::string oracle = "threshold";
  int classes = 19;
  int radius = 1;
  std::vector<std::string> attacks = {"dla", "random"};
  std::vector<int> budgets = {50, 200};
  std::vector<int> epsilons = {8};  // 0..255 integer scale
  ProxyKind proxy = ProxyKind::kMiou;
  ReferenceMode reference = ReferenceMode::kCleanPrediction;
  std::vector<std::uint64_t> seeds = {0, 1, 2};
  ExploreStrategy explore_strategy = ExploreStrategy::kAlternating;
  std::string output_dir = ".";
  bool keep_traces = true;

  void Validate() const;  // throws std::invalid_argument
};

struct SampleRun {
  std::string id;
  double final_proxy = 0.0;
  int queries = 0;
  std::vector<TracePoint> trace;
};

// One (attack, budget, epsilon, seed) configuration, averaged over the
// sample set; seed "mean" rows aggregate across seeds.
struct ResultRow {
  std::string attack;
  int budget = 0;
  int epsilon = 0;
  std::string seed;
  double mean_proxy = 0.0;
  double mean_queries = 0.0;
  double wall_ms = 0.0;
  bool failed = false;
  std::string error;
  std::vector<SampleRun> samples;
};

struct ResultTable {
  std::vector<ResultRow> rows;
  bool AnyFailed() const;
};

// Runs every (attack x budget x epsilon x seed x sample) cell with a fresh
// budgeted oracle. Budget 0 rows report the unattacked baseline proxy.
// Transport failures abort the affected cell and mark its row failed; other
// rows still run.
ResultTable RunBenchmark(const BenchmarkConfig& config,
                         const std::vector<Sample>& samples);

// One benchmark group per epsilon, table ordered by epsilon. Needs at least
// two epsilons.
ResultTable SweepEpsilon(const BenchmarkConfig& config,
                         const std::vector<Sample>& samples);

// Continuous noise vs discrete linear noise at equal budgets: random attack
// against the exploration-only attack, identical seed lists for pairing.
ResultTable StudyNoiseType(const BenchmarkConfig& config,
                           const std::vector<Sample>& samples);

// Random attack steered by miou vs pacc; both arms report the final mIoU of
// their adversarial output (scored out of budget).
ResultTable StudyProxy(const BenchmarkConfig& config,
                       const std::vector<Sample>& samples);

// Serializers. CSV columns: attack,budget,epsilon,seed,mean_proxy,
// mean_queries,wall_ms. Markdown arranges seed-mean proxies as attack rows by
// budget columns, one table per epsilon. json-traces keeps per-sample
// per-query best-so-far sequences.
std::string ToCsv(const ResultTable& table);
std::string ToMarkdown(const ResultTable& table);
std::string ToTracesJson(const ResultTable& table);

// format is "csv", "markdown", or "json-traces".
void ExportTable(const ResultTable& table, const std::string& format,
                 const std::string& path);

// Worker pool size: DLA_WORKERS when set (>= 1), else the processor count.
int WorkerCount();

}  // namespace dla

#endif  // DLA_HARNESS_H_
