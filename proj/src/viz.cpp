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
#include "dla/viz.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "dla/png_io.hpp"
#include "dla/segmenters.hpp"

namespace dla {

namespace fs = std::filesystem;

namespace {

nlohmann::json LabelsToJson(const LabelMap& labels) {
  return {{"height", labels.height()},
          {"width", labels.width()},
          {"num_classes", labels.num_classes()},
          {"labels", labels.labels()}};
}

LabelMap LabelsFromJson(const nlohmann::json& node) {
  return LabelMap::FromLabels(
      node.at("height").get<int>(), node.at("width").get<int>(),
      node.at("num_classes").get<int>(),
      node.at("labels").get<std::vector<std::uint16_t>>());
}

std::vector<std::uint8_t> ColorizeLabels(const LabelMap& labels) {
  std::vector<std::uint8_t> rgb(labels.size() * 3);
  for (int r = 0; r < labels.height(); ++r) {
    for (int c = 0; c < labels.width(); ++c) {
      const auto color = ClassColor(labels.at(r, c));
      const std::size_t base =
          (static_cast<std::size_t>(r) * labels.width() + c) * 3;
      rgb[base] = color[0];
      rgb[base + 1] = color[1];
      rgb[base + 2] = color[2];
    }
  }
  return rgb;
}

}  // namespace

void WriteAttackRun(const std::string& run_dir,
                    const AttackRunRecord& record) {
  fs::create_directories(run_dir);
  WriteImagePng((fs::path(run_dir) / "clean.png").string(), record.clean);
  WriteImagePng((fs::path(run_dir) / "adv.png").string(),
                record.result.adversarial);

  nlohmann::json trace = nlohmann::json::array();
  for (const TracePoint& point : record.result.trace) {
    trace.push_back({point.query, point.best});
  }
  const nlohmann::json doc = {
      {"attack", record.attack},
      {"oracle", record.oracle},
      {"classes", record.classes},
      {"radius", record.radius},
      {"eps", record.epsilon},
      {"proxy", record.proxy},
      {"ref", record.reference},
      {"seed", record.seed},
      {"budget", record.budget},
      {"input", record.input_path},
      {"final_proxy", record.result.final_proxy},
      {"queries_used", record.result.queries_used},
      {"trace", std::move(trace)},
      {"clean_labels", LabelsToJson(record.clean_labels)},
      {"adv_labels", LabelsToJson(record.adv_labels)},
  };
  std::ofstream out(fs::path(run_dir) / "trace.json", std::ios::binary);
  if (!out) {
    throw IoError("cannot write trace.json under " + run_dir);
  }
  out << doc.dump(2) << '\n';
}

AttackRunRecord ReadAttackRun(const std::string& run_dir) {
  const fs::path trace_path = fs::path(run_dir) / "trace.json";
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read " + trace_path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& err) {
    throw IoError("malformed trace.json: " + std::string(err.what()));
  }

  AttackRunRecord record;
  try {
    record.attack = doc.at("attack").get<std::string>();
    record.oracle = doc.at("oracle").get<std::string>();
    record.classes = doc.at("classes").get<int>();
    record.radius = doc.at("radius").get<int>();
    record.epsilon = doc.at("eps").get<int>();
    record.proxy = doc.at("proxy").get<std::string>();
    record.reference = doc.at("ref").get<std::string>();
    record.seed = doc.at("seed").get<std::uint64_t>();
    record.budget = doc.at("budget").get<int>();
    record.input_path = doc.at("input").get<std::string>();
    record.result.final_proxy = doc.at("final_proxy").get<double>();
    record.result.queries_used = doc.at("queries_used").get<int>();
    for (const auto& node : doc.at("trace")) {
      record.result.trace.push_back(
          {node.at(0).get<int>(), node.at(1).get<double>()});
    }
    record.clean_labels = LabelsFromJson(doc.at("clean_labels"));
    record.adv_labels = LabelsFromJson(doc.at("adv_labels"));
  } catch (const nlohmann::json::exception& err) {
    throw IoError("trace.json misses fields: " + std::string(err.what()));
  }
  record.clean = ReadImagePng((fs::path(run_dir) / "clean.png").string());
  record.result.adversarial =
      ReadImagePng((fs::path(run_dir) / "adv.png").string());
  return record;
}

void RenderAttackRun(const std::string& run_dir, const std::string& out_dir) {
  const AttackRunRecord record = ReadAttackRun(run_dir);
  fs::create_directories(out_dir);

  WriteImagePng((fs::path(out_dir) / "clean.png").string(), record.clean);
  WriteImagePng((fs::path(out_dir) / "adv.png").string(),
                record.result.adversarial);

  const Image& clean = record.clean;
  const Image& adv = record.result.adversarial;
  if (!clean.SameShape(adv)) {
    throw IoError("clean.png and adv.png disagree in shape");
  }
  const int height = clean.height();
  const int width = clean.width();
  const double epsilon = record.epsilon / 255.0;
  std::vector<std::uint8_t> pert(static_cast<std::size_t>(height) * width * 3);
  for (int r = 0; r < height; ++r) {
    for (int col = 0; col < width; ++col) {
      const std::size_t base =
          (static_cast<std::size_t>(r) * width + col) * 3;
      for (int c = 0; c < 3; ++c) {
        const int source = std::min(c, clean.channels() - 1);
        const double delta =
            adv.at(source, r, col) - clean.at(source, r, col);
        const double gray =
            epsilon == 0.0 ? 0.5 : (delta + epsilon) / (2.0 * epsilon);
        pert[base + c] = static_cast<std::uint8_t>(
            std::lround(std::min(1.0, std::max(0.0, gray)) * 255.0));
      }
    }
  }
  WriteRgbPng((fs::path(out_dir) / "perturbation.png").string(), height,
              width, pert);

  WriteRgbPng((fs::path(out_dir) / "pred_clean.png").string(),
              record.clean_labels.height(), record.clean_labels.width(),
              ColorizeLabels(record.clean_labels));
  WriteRgbPng((fs::path(out_dir) / "pred_adv.png").string(),
              record.adv_labels.height(), record.adv_labels.width(),
              ColorizeLabels(record.adv_labels));
}

}  // namespace dla
