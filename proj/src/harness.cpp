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

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "dla/png_io.hpp"
#include "dla/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#else
#include <thread>
#endif

namespace dla {

namespace fs = std::filesystem;

bool ResultTable::AnyFailed() const {
  return std::any_of(rows.begin(), rows.end(),
                     [](const ResultRow& row) { return row.failed; });
}

int WorkerCount() {
  if (const char* env = std::getenv("DLA_WORKERS")) {
    const int workers = std::atoi(env);
    if (workers >= 1) return workers;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return std::max(1u, std::thread::hardware_concurrency());
#endif
}

DatasetLoadResult LoadDataset(const std::string& images_dir,
                              const std::string& labels_dir) {
  if (!fs::is_directory(images_dir)) {
    throw std::invalid_argument(images_dir + " is not a directory");
  }
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(images_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      names.push_back(entry.path().filename().string());
    }
  }
  std::sort(names.begin(), names.end());

  DatasetLoadResult result;
  for (const std::string& name : names) {
    try {
      Sample sample;
      sample.id = fs::path(name).stem().string();
      sample.image = ReadImagePng((fs::path(images_dir) / name).string());
      if (!labels_dir.empty()) {
        const fs::path label_path = fs::path(labels_dir) / name;
        if (fs::exists(label_path)) {
          LabelMap labels = ReadLabelsPng(label_path.string());
          if (labels.height() != sample.image.height() ||
              labels.width() != sample.image.width()) {
            throw IoError("label shape mismatch for " + name);
          }
          sample.ground_truth = std::move(labels);
        }
      }
      result.samples.push_back(std::move(sample));
    } catch (const IoError& err) {
      std::fprintf(stderr, "warning: skipping %s: %s\n", name.c_str(),
                   err.what());
      result.skipped.push_back(name);
    }
  }
  if (result.samples.empty()) {
    throw std::invalid_argument("no decodable images in " + images_dir);
  }
  return result;
}

void BenchmarkConfig::Validate() const {
  if (attacks.empty() || budgets.empty() || epsilons.empty() ||
      seeds.empty()) {
    throw std::invalid_argument(
        "attacks, budgets, epsilons, and seeds must be nonempty");
  }
  for (const std::string& attack : attacks) {
    if (AttackRegistry().find(attack) == AttackRegistry().end()) {
      throw std::invalid_argument("unknown attack: " + attack);
    }
  }
  for (int budget : budgets) {
    if (budget < 0) throw std::invalid_argument("budgets must be >= 0");
  }
  for (int epsilon : epsilons) {
    if (epsilon < 0 || epsilon > 255) {
      throw std::invalid_argument("epsilons must lie in [0, 255]");
    }
  }
}

namespace {

struct RowSpec {
  std::string display;  // attack column value
  std::string base;     // stream-seed derivation name
  AttackFn fn;
  int budget = 0;
  int epsilon = 0;
  ProxyKind proxy = ProxyKind::kMiou;
  bool rescore_miou = false;
};

struct CellOutcome {
  double final_proxy = 0.0;
  int queries = 0;
  std::vector<TracePoint> trace;
  bool ok = true;
  std::string error;
  double ms = 0.0;
};

LabelMap ResolveScoringReference(const Oracle& oracle, const Sample& sample,
                                 ReferenceMode mode) {
  if (mode == ReferenceMode::kGroundTruth) return *sample.ground_truth;
  return oracle.Query(sample.image);
}

CellOutcome RunCell(const RowSpec& spec, const BenchmarkConfig& config,
                    const Sample& sample, std::uint64_t seed,
                    const Oracle& oracle) {
  CellOutcome outcome;
  const auto start = std::chrono::steady_clock::now();
  try {
    const ReferenceSpec ref_spec{config.reference, sample.ground_truth};
    if (spec.budget == 0) {
      // Clean row: the unattacked proxy, one query.
      BudgetedOracle budgeted(oracle, 1);
      const LabelMap clean = budgeted.Query(sample.image);
      const LabelMap ref =
          config.reference == ReferenceMode::kGroundTruth
              ? *sample.ground_truth
              : clean;
      const ProxyKind kind =
          spec.rescore_miou ? ProxyKind::kMiou : spec.proxy;
      outcome.final_proxy =
          ProxyMetric(kind, clean, ref, oracle.num_classes());
      outcome.queries = budgeted.used();
      outcome.trace.push_back({1, outcome.final_proxy});
    } else {
      AttackConfig attack_config;
      attack_config.epsilon = spec.epsilon / 255.0;
      attack_config.budget = spec.budget;
      attack_config.proxy = spec.proxy;
      attack_config.seed = DeriveStreamSeed(spec.base, sample.id, seed);
      attack_config.explore_strategy = config.explore_strategy;

      BudgetedOracle budgeted(oracle, spec.budget + 1);
      AttackResult result =
          spec.fn(budgeted, sample.image, ref_spec, attack_config);
      outcome.final_proxy = result.final_proxy;
      if (spec.rescore_miou) {
        // Score the produced image in mIoU regardless of the steering proxy;
        // evaluation queries are not budgeted.
        const LabelMap pred = oracle.Query(result.adversarial);
        const LabelMap ref =
            ResolveScoringReference(oracle, sample, config.reference);
        outcome.final_proxy = Miou(pred, ref, oracle.num_classes());
      }
      outcome.queries = result.queries_used;
      outcome.trace = std::move(result.trace);
    }
  } catch (const TransportError& err) {
    outcome.ok = false;
    outcome.error = err.what();
  } catch (const ProtocolError& err) {
    outcome.ok = false;
    outcome.error = err.what();
  }
  outcome.ms = std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return outcome;
}

ResultTable RunRows(const BenchmarkConfig& config,
                    const std::vector<Sample>& samples,
                    const std::vector<RowSpec>& specs) {
  config.Validate();
  if (samples.empty()) {
    throw std::invalid_argument("sample set is empty");
  }
  if (config.reference == ReferenceMode::kGroundTruth) {
    for (const Sample& sample : samples) {
      if (!sample.ground_truth.has_value()) {
        throw std::invalid_argument("sample " + sample.id +
                                    " has no ground-truth labels");
      }
    }
  }

  const int workers = WorkerCount();
  const std::int64_t seeds = static_cast<std::int64_t>(config.seeds.size());
  const std::int64_t per_spec = seeds * samples.size();
  const std::int64_t total = per_spec * specs.size();
  std::vector<CellOutcome> outcomes(total);
  std::vector<std::unique_ptr<Oracle>> oracles(workers);
  std::vector<std::string> oracle_errors(workers);

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t cell = 0; cell < total; ++cell) {
#ifdef _OPENMP
    const int tid = omp_get_thread_num();
#else
    const int tid = 0;
#endif
    if (!oracles[tid] && oracle_errors[tid].empty()) {
      try {
        oracles[tid] = MakeOracle(config.oracle, config.classes,
                                  config.radius);
      } catch (const std::exception& err) {
        oracle_errors[tid] = err.what();
      }
    }
    if (!oracles[tid]) {
      outcomes[cell].ok = false;
      outcomes[cell].error = oracle_errors[tid];
      continue;
    }
    const std::int64_t spec_idx = cell / per_spec;
    const std::int64_t seed_idx = (cell % per_spec) / samples.size();
    const std::int64_t sample_idx = cell % samples.size();
    outcomes[cell] =
        RunCell(specs[spec_idx], config, samples[sample_idx],
                config.seeds[seed_idx], *oracles[tid]);
  }

  // Deterministic merge: results depend only on (spec, seed, sample) keys,
  // never on scheduling, so serial aggregation in key order fixes the bytes.
  ResultTable table;
  for (std::size_t spec_idx = 0; spec_idx < specs.size(); ++spec_idx) {
    const RowSpec& spec = specs[spec_idx];
    double seed_proxy_sum = 0.0;
    double seed_query_sum = 0.0;
    double seed_wall_sum = 0.0;
    bool any_seed_failed = false;
    std::string first_error;
    for (std::size_t seed_idx = 0; seed_idx < config.seeds.size();
         ++seed_idx) {
      ResultRow row;
      row.attack = spec.display;
      row.budget = spec.budget;
      row.epsilon = spec.epsilon;
      row.seed = std::to_string(config.seeds[seed_idx]);
      double proxy_sum = 0.0;
      double query_sum = 0.0;
      for (std::size_t sample_idx = 0; sample_idx < samples.size();
           ++sample_idx) {
        const std::int64_t cell =
            static_cast<std::int64_t>(spec_idx) * per_spec +
            static_cast<std::int64_t>(seed_idx) * samples.size() + sample_idx;
        const CellOutcome& outcome = outcomes[cell];
        row.wall_ms += outcome.ms;
        if (!outcome.ok) {
          row.failed = true;
          if (row.error.empty()) row.error = outcome.error;
          continue;
        }
        proxy_sum += outcome.final_proxy;
        query_sum += outcome.queries;
        SampleRun run;
        run.id = samples[sample_idx].id;
        run.final_proxy = outcome.final_proxy;
        run.queries = outcome.queries;
        if (config.keep_traces) run.trace = outcome.trace;
        row.samples.push_back(std::move(run));
      }
      if (!row.failed) {
        row.mean_proxy = proxy_sum / samples.size();
        row.mean_queries = query_sum / samples.size();
      }
      seed_proxy_sum += row.mean_proxy;
      seed_query_sum += row.mean_queries;
      seed_wall_sum += row.wall_ms;
      any_seed_failed = any_seed_failed || row.failed;
      if (first_error.empty()) first_error = row.error;
      table.rows.push_back(std::move(row));
    }
    ResultRow mean_row;
    mean_row.attack = spec.display;
    mean_row.budget = spec.budget;
    mean_row.epsilon = spec.epsilon;
    mean_row.seed = "mean";
    mean_row.failed = any_seed_failed;
    mean_row.error = first_error;
    if (!any_seed_failed) {
      mean_row.mean_proxy = seed_proxy_sum / config.seeds.size();
      mean_row.mean_queries = seed_query_sum / config.seeds.size();
    }
    mean_row.wall_ms = seed_wall_sum;
    table.rows.push_back(std::move(mean_row));
  }
  return table;
}

std::vector<RowSpec> BenchmarkSpecs(const BenchmarkConfig& config) {
  std::vector<RowSpec> specs;
  for (const std::string& attack : config.attacks) {
    for (int budget : config.budgets) {
      for (int epsilon : config.epsilons) {
        specs.push_back({attack, attack, AttackRegistry().at(attack), budget,
                         epsilon, config.proxy, false});
      }
    }
  }
  return specs;
}

}  // namespace

ResultTable RunBenchmark(const BenchmarkConfig& config,
                         const std::vector<Sample>& samples) {
  return RunRows(config, samples, BenchmarkSpecs(config));
}

ResultTable SweepEpsilon(const BenchmarkConfig& config,
                         const std::vector<Sample>& samples) {
  if (config.epsilons.size() < 2) {
    throw std::invalid_argument("sweep needs at least two epsilons");
  }
  std::vector<RowSpec> specs;
  for (int epsilon : config.epsilons) {
    for (const std::string& attack : config.attacks) {
      for (int budget : config.budgets) {
        specs.push_back({attack, attack, AttackRegistry().at(attack), budget,
                         epsilon, config.proxy, false});
      }
    }
  }
  return RunRows(config, samples, specs);
}

ResultTable StudyNoiseType(const BenchmarkConfig& config,
                           const std::vector<Sample>& samples) {
  std::vector<RowSpec> specs;
  for (const std::string& attack : {std::string("random"),
                                    std::string("dla-explore")}) {
    for (int budget : config.budgets) {
      for (int epsilon : config.epsilons) {
        specs.push_back({attack, attack, AttackRegistry().at(attack), budget,
                         epsilon, config.proxy, false});
      }
    }
  }
  BenchmarkConfig patched = config;
  patched.attacks = {"random", "dla-explore"};
  return RunRows(patched, samples, specs);
}

ResultTable StudyProxy(const BenchmarkConfig& config,
                       const std::vector<Sample>& samples) {
  std::vector<RowSpec> specs;
  for (ProxyKind kind : {ProxyKind::kMiou, ProxyKind::kPacc}) {
    for (int budget : config.budgets) {
      for (int epsilon : config.epsilons) {
        specs.push_back({"random:" + ToString(kind), "random",
                         AttackRegistry().at("random"), budget, epsilon, kind,
                         true});
      }
    }
  }
  BenchmarkConfig patched = config;
  patched.attacks = {"random"};
  return RunRows(patched, samples, specs);
}

namespace {

std::string FormatDouble(const char* format, double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, value);
  return buffer;
}

std::string ProxyField(const ResultRow& row) {
  return row.failed ? "nan" : FormatDouble("%.9f", row.mean_proxy);
}

}  // namespace

std::string ToCsv(const ResultTable& table) {
  std::ostringstream out;
  out << "attack,budget,epsilon,seed,mean_proxy,mean_queries,wall_ms\n";
  for (const ResultRow& row : table.rows) {
    out << row.attack << ',' << row.budget << ',' << row.epsilon << ','
        << row.seed << ',' << ProxyField(row) << ','
        << (row.failed ? "nan" : FormatDouble("%.6f", row.mean_queries))
        << ',' << FormatDouble("%.3f", row.wall_ms) << '\n';
  }
  return out.str();
}

std::string ToMarkdown(const ResultTable& table) {
  // attack rows by budget columns, one table per epsilon, seed-mean mIoU %.
  std::vector<int> epsilons;
  std::vector<int> budgets;
  std::vector<std::string> attacks;
  for (const ResultRow& row : table.rows) {
    if (std::find(epsilons.begin(), epsilons.end(), row.epsilon) ==
        epsilons.end()) {
      epsilons.push_back(row.epsilon);
    }
    if (std::find(budgets.begin(), budgets.end(), row.budget) ==
        budgets.end()) {
      budgets.push_back(row.budget);
    }
    if (std::find(attacks.begin(), attacks.end(), row.attack) ==
        attacks.end()) {
      attacks.push_back(row.attack);
    }
  }
  std::ostringstream out;
  for (int epsilon : epsilons) {
    out << "## epsilon " << epsilon << "/255\n\n";
    out << "| attack |";
    for (int budget : budgets) out << " budget " << budget << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < budgets.size(); ++i) out << "---:|";
    out << '\n';
    for (const std::string& attack : attacks) {
      out << "| " << attack << " |";
      for (int budget : budgets) {
        const auto it = std::find_if(
            table.rows.begin(), table.rows.end(),
            [&](const ResultRow& row) {
              return row.attack == attack && row.budget == budget &&
                     row.epsilon == epsilon && row.seed == "mean";
            });
        if (it == table.rows.end()) {
          out << " - |";
        } else if (it->failed) {
          out << " failed |";
        } else {
          out << ' ' << FormatDouble("%.2f", it->mean_proxy * 100.0) << " |";
        }
      }
      out << '\n';
    }
    out << '\n';
  }
  return out.str();
}

std::string ToTracesJson(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ResultRow& row : table.rows) {
    if (row.seed == "mean") continue;
    nlohmann::json samples = nlohmann::json::array();
    for (const SampleRun& run : row.samples) {
      nlohmann::json trace = nlohmann::json::array();
      for (const TracePoint& point : run.trace) {
        trace.push_back({point.query, point.best});
      }
      samples.push_back({{"id", run.id},
                         {"final_proxy", run.final_proxy},
                         {"queries", run.queries},
                         {"trace", std::move(trace)}});
    }
    rows.push_back({{"attack", row.attack},
                    {"budget", row.budget},
                    {"epsilon", row.epsilon},
                    {"seed", std::stoull(row.seed)},
                    {"failed", row.failed},
                    {"samples", std::move(samples)}});
  }
  return nlohmann::json{{"rows", std::move(rows)}}.dump(2);
}

void ExportTable(const ResultTable& table, const std::string& format,
                 const std::string& path) {
  std::string payload;
  if (format == "csv") {
    payload = ToCsv(table);
  } else if (format == "markdown") {
    payload = ToMarkdown(table);
  } else if (format == "json-traces") {
    payload = ToTracesJson(table);
  } else {
    throw std::invalid_argument("unknown export format: " + format);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << payload;
  if (!out.good()) {
    throw IoError("failed writing " + path);
  }
}

}  // namespace dla
