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
#include "dla/oracle.hpp"

#include <stdexcept>

#include "dla/remote.hpp"
#include "dla/segmenters.hpp"

namespace dla {

ReferenceMode ParseReferenceMode(const std::string& name) {
  if (name == "clean") return ReferenceMode::kCleanPrediction;
  if (name == "gt") return ReferenceMode::kGroundTruth;
  throw std::invalid_argument("unknown reference mode: " + name);
}

std::string ToString(ReferenceMode mode) {
  return mode == ReferenceMode::kCleanPrediction ? "clean" : "gt";
}

double ProxyValue(BudgetedOracle& oracle, const Image& image,
                  const ReferenceLabels& ref, ProxyKind kind) {
  const LabelMap pred = oracle.Query(image);
  const double value =
      ProxyMetric(kind, pred, ref.labels, oracle.inner().num_classes());
  oracle.LogProxy(value);
  return value;
}

std::unique_ptr<Oracle> MakeOracle(const std::string& spec, int classes,
                                   int radius) {
  if (spec == "threshold") {
    return std::make_unique<ThresholdOracle>(classes);
  }
  if (spec == "palette") {
    const auto& full = DefaultClassPalette();
    if (classes < 1 || classes > static_cast<int>(full.size())) {
      throw std::invalid_argument(
          "palette oracle supports 1.." + std::to_string(full.size()) +
          " classes");
    }
    return std::make_unique<PaletteOracle>(std::vector<std::array<double, 3>>(
        full.begin(), full.begin() + classes));
  }
  if (spec == "context") {
    return std::make_unique<ContextOracle>(classes, radius);
  }
  if (spec.rfind("cmd:", 0) == 0 || spec.rfind("tcp:", 0) == 0) {
    return std::make_unique<RemoteOracle>(spec);
  }
  throw std::invalid_argument("unknown oracle spec: " + spec);
}

}  // namespace dla
