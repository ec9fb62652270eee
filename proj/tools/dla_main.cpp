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
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dla/attack.hpp"
#include "dla/fixtures.hpp"
#include "dla/harness.hpp"
#include "dla/oracle.hpp"
#include "dla/png_io.hpp"
#include "dla/viz.hpp"

namespace {

namespace fs = std::filesystem;

void PrintSummary(const std::string& attack, double proxy, double queries) {
  std::printf("attack=%s proxy=%.6f queries=%g\n", attack.c_str(), proxy,
              queries);
}

std::vector<std::string> SplitList(const std::string& csv) {
  std::vector<std::string> items;
  std::stringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

std::vector<int> SplitInts(const std::string& csv, const char* what) {
  std::vector<int> values;
  for (const std::string& item : SplitList(csv)) {
    try {
      values.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what) +
                                 " must be a comma-separated integer list");
    }
  }
  return values;
}

std::vector<std::uint64_t> SplitSeeds(const std::string& csv) {
  std::vector<std::uint64_t> values;
  for (const std::string& item : SplitList(csv)) {
    try {
      values.push_back(std::stoull(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("seeds must be a comma-separated list");
    }
  }
  return values;
}

// Flags shared by bench, sweep, and study; mirrored 1:1 by config-file keys.
struct BenchFlags {
  std::string images;
  std::string labels;
  std::string oracle = "threshold";
  int classes = 19;
  int radius = 1;
  std::string attacks = "dla,random";
  std::string budgets = "50,200";
  std::string epsilons = "8";
  std::string proxy = "miou";
  std::string ref = "clean";
  std::string seeds = "0,1,2";
  std::string explore = "alternating";
  std::string out = ".";
};

void AddBenchFlags(CLI::App* cmd, BenchFlags& flags) {
  cmd->set_config("--config", "", "flat key=value file mirroring the flags");
  cmd->add_option("--images", flags.images, "directory of 8-bit RGB PNGs")
      ->required();
  cmd->add_option("--labels", flags.labels,
                  "directory of grayscale label PNGs (class id per pixel)");
  cmd->add_option("--oracle", flags.oracle,
                  "threshold|palette|context|cmd:<prog>|tcp:<host>:<port>");
  cmd->add_option("--classes", flags.classes, "built-in oracle class count")
      ->check(CLI::Range(2, 65535));
  cmd->add_option("--radius", flags.radius, "context oracle window radius")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--attacks", flags.attacks, "comma list of attacks");
  cmd->add_option("--budgets", flags.budgets, "comma list of query budgets");
  cmd->add_option("--epsilons", flags.epsilons,
                  "comma list of perturbation bounds on the 0..255 scale");
  cmd->add_option("--proxy", flags.proxy)
      ->check(CLI::IsMember({"miou", "pacc"}));
  cmd->add_option("--ref", flags.ref, "reference labels: model's clean "
                                      "prediction or ground truth")
      ->check(CLI::IsMember({"clean", "gt"}));
  cmd->add_option("--seeds", flags.seeds, "comma list of seeds");
  cmd->add_option("--explore", flags.explore)
      ->check(CLI::IsMember({"horizontal", "vertical", "alternating"}));
  cmd->add_option("--out", flags.out, "output directory");
}

dla::BenchmarkConfig ToConfig(const BenchFlags& flags) {
  dla::BenchmarkConfig config;
  config.oracle = flags.oracle;
  config.classes = flags.classes;
  config.radius = flags.radius;
  config.attacks = SplitList(flags.attacks);
  config.budgets = SplitInts(flags.budgets, "budgets");
  config.epsilons = SplitInts(flags.epsilons, "epsilons");
  config.proxy = dla::ParseProxyKind(flags.proxy);
  config.reference = dla::ParseReferenceMode(flags.ref);
  config.seeds = SplitSeeds(flags.seeds);
  config.explore_strategy = dla::ParseExploreStrategy(flags.explore);
  config.output_dir = flags.out;
  return config;
}

int ExportAndSummarize(const dla::ResultTable& table,
                       const dla::BenchmarkConfig& config,
                       const std::string& attack_label) {
  fs::create_directories(config.output_dir);
  const fs::path dir(config.output_dir);
  dla::ExportTable(table, "csv", (dir / "results.csv").string());
  dla::ExportTable(table, "markdown", (dir / "results.md").string());
  dla::ExportTable(table, "json-traces", (dir / "traces.json").string());

  double proxy_sum = 0.0;
  double query_sum = 0.0;
  int counted = 0;
  for (const dla::ResultRow& row : table.rows) {
    if (row.seed != "mean" || row.failed) continue;
    proxy_sum += row.mean_proxy;
    query_sum += row.mean_queries;
    ++counted;
  }
  for (const dla::ResultRow& row : table.rows) {
    if (row.failed && row.seed == "mean") {
      std::fprintf(stderr, "failed: attack=%s budget=%d epsilon=%d: %s\n",
                   row.attack.c_str(), row.budget, row.epsilon,
                   row.error.c_str());
    }
  }
  PrintSummary(attack_label, counted > 0 ? proxy_sum / counted : 0.0,
               counted > 0 ? query_sum / counted : 0.0);
  return table.AnyFailed() ? 1 : 0;
}

int RunAttackCommand(const std::string& input, const std::string& attack_name,
                     const std::string& oracle_spec, int classes, int radius,
                     int eps, int budget, const std::string& proxy,
                     const std::string& ref, const std::string& gt_path,
                     std::uint64_t seed, const std::string& explore,
                     const std::string& out_dir) {
  const dla::Image image = dla::ReadImagePng(input);
  const auto oracle = dla::MakeOracle(oracle_spec, classes, radius);

  dla::ReferenceSpec ref_spec;
  ref_spec.mode = dla::ParseReferenceMode(ref);
  if (ref_spec.mode == dla::ReferenceMode::kGroundTruth) {
    if (gt_path.empty()) {
      throw std::invalid_argument("--ref gt requires --gt <label png>");
    }
    ref_spec.ground_truth = dla::ReadLabelsPng(gt_path);
  }

  dla::AttackConfig config;
  config.epsilon = eps / 255.0;
  config.budget = budget;
  config.proxy = dla::ParseProxyKind(proxy);
  config.explore_strategy = dla::ParseExploreStrategy(explore);
  const std::string id = fs::path(input).stem().string();
  config.seed = dla::DeriveStreamSeed(attack_name, id, seed);

  dla::BudgetedOracle budgeted(*oracle, budget + 1);
  const dla::AttackResult result =
      dla::AttackRegistry().at(attack_name)(budgeted, image, ref_spec, config);

  dla::AttackRunRecord record;
  record.attack = attack_name;
  record.oracle = oracle_spec;
  record.classes = oracle->num_classes();
  record.radius = radius;
  record.epsilon = eps;
  record.proxy = proxy;
  record.reference = ref;
  record.seed = seed;
  record.budget = budget;
  record.input_path = input;
  record.clean = image;
  record.clean_labels = oracle->Query(image);
  record.adv_labels = oracle->Query(result.adversarial);
  record.result = result;
  dla::WriteAttackRun(out_dir, record);

  PrintSummary(attack_name, result.final_proxy, result.queries_used);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Query-budgeted black-box robustness evaluation for pixel-level "
      "classifiers: attacks, deterministic oracles, and a benchmark harness"};
  app.require_subcommand(1);

  std::vector<std::string> attack_names;
  for (const auto& [name, fn] : dla::AttackRegistry()) {
    attack_names.push_back(name);
  }

  // ---- attack ----
  auto* attack_cmd =
      app.add_subcommand("attack", "attack one PNG and save the run");
  std::string a_input;
  std::string a_attack = "dla";
  std::string a_oracle = "threshold";
  int a_classes = 19;
  int a_radius = 1;
  int a_eps = 8;
  int a_budget = 200;
  std::string a_proxy = "miou";
  std::string a_ref = "clean";
  std::string a_gt;
  std::uint64_t a_seed = 0;
  std::string a_explore = "alternating";
  std::string a_out = ".";
  attack_cmd->set_config("--config", "",
                         "flat key=value file mirroring the flags");
  attack_cmd->add_option("input", a_input, "PNG image to attack")->required();
  attack_cmd->add_option("--attack", a_attack)
      ->check(CLI::IsMember(attack_names));
  attack_cmd->add_option("--oracle", a_oracle,
                         "threshold|palette|context|cmd:<prog>|tcp:<h>:<p>");
  attack_cmd->add_option("--classes", a_classes)->check(CLI::Range(2, 65535));
  attack_cmd->add_option("--radius", a_radius)->check(CLI::PositiveNumber);
  attack_cmd
      ->add_option("--eps", a_eps,
                   "max perturbation on the 0..255 integer scale "
                   "(8 means 8/255)")
      ->check(CLI::Range(0, 255));
  attack_cmd->add_option("--budget", a_budget, "iteration query budget")
      ->check(CLI::PositiveNumber);
  attack_cmd->add_option("--proxy", a_proxy)
      ->check(CLI::IsMember({"miou", "pacc"}));
  attack_cmd->add_option("--ref", a_ref)
      ->check(CLI::IsMember({"clean", "gt"}));
  attack_cmd->add_option("--gt", a_gt, "ground-truth label PNG");
  attack_cmd->add_option("--seed", a_seed);
  attack_cmd->add_option("--explore", a_explore)
      ->check(CLI::IsMember({"horizontal", "vertical", "alternating"}));
  attack_cmd->add_option("--out", a_out, "run output directory");

  // ---- bench / sweep / study ----
  BenchFlags bench_flags;
  auto* bench_cmd =
      app.add_subcommand("bench", "benchmark attacks over a dataset");
  AddBenchFlags(bench_cmd, bench_flags);

  BenchFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "benchmark across perturbation magnitudes");
  AddBenchFlags(sweep_cmd, sweep_flags);

  BenchFlags study_flags;
  std::string study_kind;
  auto* study_cmd = app.add_subcommand(
      "study", "paired comparisons: noise type or proxy choice");
  AddBenchFlags(study_cmd, study_flags);
  study_cmd->add_option("--kind", study_kind, "noise|proxy")
      ->required()
      ->check(CLI::IsMember({"noise", "proxy"}));

  // ---- render ----
  auto* render_cmd =
      app.add_subcommand("render", "render a saved attack run as PNGs");
  std::string r_run;
  std::string r_out;
  render_cmd->add_option("--run", r_run, "attack run directory")->required();
  render_cmd->add_option("--out", r_out, "output directory")->required();

  // ---- gen-fixtures ----
  auto* gen_cmd = app.add_subcommand(
      "gen-fixtures", "write the deterministic synthetic evaluation set");
  std::string g_out;
  int g_count = 20;
  int g_size = 64;
  gen_cmd->add_option("--out", g_out, "output directory")->required();
  gen_cmd->add_option("--count", g_count)->check(CLI::PositiveNumber);
  gen_cmd->add_option("--size", g_size)->check(CLI::Range(1, 4096));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err, std::cout, std::cerr);
    return 2;
  }

  try {
    if (*attack_cmd) {
      return RunAttackCommand(a_input, a_attack, a_oracle, a_classes,
                              a_radius, a_eps, a_budget, a_proxy, a_ref, a_gt,
                              a_seed, a_explore, a_out);
    }
    if (*bench_cmd) {
      const dla::BenchmarkConfig config = ToConfig(bench_flags);
      const auto dataset = dla::LoadDataset(bench_flags.images,
                                            bench_flags.labels);
      const dla::ResultTable table =
          dla::RunBenchmark(config, dataset.samples);
      std::string label;
      for (const std::string& name : config.attacks) {
        label += (label.empty() ? "" : "+") + name;
      }
      return ExportAndSummarize(table, config, label);
    }
    if (*sweep_cmd) {
      const dla::BenchmarkConfig config = ToConfig(sweep_flags);
      const auto dataset = dla::LoadDataset(sweep_flags.images,
                                            sweep_flags.labels);
      const dla::ResultTable table =
          dla::SweepEpsilon(config, dataset.samples);
      std::string label;
      for (const std::string& name : config.attacks) {
        label += (label.empty() ? "" : "+") + name;
      }
      return ExportAndSummarize(table, config, label);
    }
    if (*study_cmd) {
      const dla::BenchmarkConfig config = ToConfig(study_flags);
      const auto dataset = dla::LoadDataset(study_flags.images,
                                            study_flags.labels);
      const dla::ResultTable table =
          study_kind == "noise" ? dla::StudyNoiseType(config, dataset.samples)
                                : dla::StudyProxy(config, dataset.samples);
      return ExportAndSummarize(table, config, "study-" + study_kind);
    }
    if (*render_cmd) {
      dla::RenderAttackRun(r_run, r_out);
      const dla::AttackRunRecord record = dla::ReadAttackRun(r_run);
      PrintSummary(record.attack, record.result.final_proxy,
                   record.result.queries_used);
      return 0;
    }
    if (*gen_cmd) {
      dla::WriteFixtureSet(g_out, g_count, g_size);
      std::fprintf(stderr, "wrote %d %dx%d fixtures under %s\n", g_count,
                   g_size, g_size, g_out.c_str());
      PrintSummary("none", 0.0, 0.0);
      return 0;
    }
  } catch (const std::invalid_argument& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  }
  return 2;
}
