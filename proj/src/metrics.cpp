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
#include "dla/metrics.hpp"

#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dla {

ProxyKind ParseProxyKind(const std::string& name) {
  if (name == "miou") return ProxyKind::kMiou;
  if (name == "pacc") return ProxyKind::kPacc;
  throw std::invalid_argument("unknown proxy kind: " + name);
}

std::string ToString(ProxyKind kind) {
  return kind == ProxyKind::kMiou ? "miou" : "pacc";
}

ConfusionMatrix::ConfusionMatrix(int num_classes) : num_classes_(num_classes) {
  if (num_classes < 1) {
    throw std::invalid_argument("confusion matrix needs at least one class");
  }
  counts_.assign(static_cast<std::size_t>(num_classes) * num_classes, 0);
}

std::int64_t ConfusionMatrix::Total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

namespace {

void CheckInputs(const LabelMap& pred, const LabelMap& ref, int num_classes) {
  if (!pred.SameShape(ref)) {
    throw std::invalid_argument("label maps differ in shape");
  }
  for (std::uint16_t label : pred.labels()) {
    if (label >= num_classes) {
      throw std::invalid_argument("predicted label out of class range");
    }
  }
  for (std::uint16_t label : ref.labels()) {
    if (label >= num_classes) {
      throw std::invalid_argument("reference label out of class range");
    }
  }
}

}  // namespace

ConfusionMatrix BuildConfusionMatrix(const LabelMap& pred, const LabelMap& ref,
                                     int num_classes) {
  CheckInputs(pred, ref, num_classes);
  ConfusionMatrix matrix(num_classes);
  const std::int64_t n = static_cast<std::int64_t>(pred.size());
  const std::uint16_t* p = pred.labels().data();
  const std::uint16_t* r = ref.labels().data();
#ifdef _OPENMP
#pragma omp parallel
  {
    ConfusionMatrix local(num_classes);
#pragma omp for nowait
    for (std::int64_t i = 0; i < n; ++i) {
      ++local.at(r[i], p[i]);
    }
#pragma omp critical(dla_confusion_merge)
    {
      for (int a = 0; a < num_classes; ++a) {
        for (int b = 0; b < num_classes; ++b) {
          matrix.at(a, b) += local.at(a, b);
        }
      }
    }
  }
#else
  for (std::int64_t i = 0; i < n; ++i) {
    ++matrix.at(r[i], p[i]);
  }
#endif
  return matrix;
}

namespace serial {

ConfusionMatrix BuildConfusionMatrix(const LabelMap& pred, const LabelMap& ref,
                                     int num_classes) {
  CheckInputs(pred, ref, num_classes);
  ConfusionMatrix matrix(num_classes);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++matrix.at(ref.labels()[i], pred.labels()[i]);
  }
  return matrix;
}

}  // namespace serial

double Miou(const ConfusionMatrix& matrix) {
  const int k = matrix.num_classes();
  std::vector<std::int64_t> ref_totals(k, 0);
  std::vector<std::int64_t> pred_totals(k, 0);
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      ref_totals[a] += matrix.at(a, b);
      pred_totals[b] += matrix.at(a, b);
    }
  }
  double sum = 0.0;
  int counted = 0;
  for (int c = 0; c < k; ++c) {
    const std::int64_t intersection = matrix.at(c, c);
    const std::int64_t unions =
        ref_totals[c] + pred_totals[c] - intersection;
    if (unions == 0) continue;  // class absent from both maps
    sum += static_cast<double>(intersection) / static_cast<double>(unions);
    ++counted;
  }
  return counted == 0 ? 1.0 : sum / counted;
}

double Miou(const LabelMap& pred, const LabelMap& ref, int num_classes) {
  return Miou(BuildConfusionMatrix(pred, ref, num_classes));
}

double Pacc(const LabelMap& pred, const LabelMap& ref) {
  if (!pred.SameShape(ref)) {
    throw std::invalid_argument("label maps differ in shape");
  }
  const std::int64_t n = static_cast<std::int64_t>(pred.size());
  const std::uint16_t* p = pred.labels().data();
  const std::uint16_t* r = ref.labels().data();
  std::int64_t matches = 0;
#pragma omp parallel for reduction(+ : matches)
  for (std::int64_t i = 0; i < n; ++i) {
    matches += p[i] == r[i] ? 1 : 0;
  }
  return static_cast<double>(matches) / static_cast<double>(n);
}

double ProxyMetric(ProxyKind kind, const LabelMap& pred, const LabelMap& ref,
                   int num_classes) {
  return kind == ProxyKind::kMiou ? Miou(pred, ref, num_classes)
                                  : Pacc(pred, ref);
}

}  // namespace dla
