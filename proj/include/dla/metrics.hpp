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
#ifndef DLA_METRICS_H_
#define DLA_METRICS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "dla/types.hpp"

namespace dla {

// The scalar a decision-based attacker minimizes in place of a loss.
enum class ProxyKind {
  kMiou,
  kPacc,
};

ProxyKind ParseProxyKind(const std::string& name);
std::string ToString(ProxyKind kind);

// K x K pixel counts, counts(a, b) = pixels with reference class a predicted
// as class b.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(int num_classes);

  int num_classes() const { return num_classes_; }
  std::int64_t at(int ref_class, int pred_class) const {
    return counts_[static_cast<std::size_t>(ref_class) * num_classes_ +
                   pred_class];
  }
  std::int64_t& at(int ref_class, int pred_class) {
    return counts_[static_cast<std::size_t>(ref_class) * num_classes_ +
                   pred_class];
  }
  std::int64_t Total() const;

 private:
  int num_classes_ = 0;
  std::vector<std::int64_t> counts_;
};

// Throws std::invalid_argument on shape mismatch or a label >= num_classes.
ConfusionMatrix BuildConfusionMatrix(const LabelMap& pred, const LabelMap& ref,
                                     int num_classes);

// Per-image mean IoU over classes present in either map; a class present in
// exactly one map contributes 0 to the mean, classes absent from both are
// skipped. Returns 1.0 when the maps are identical.
double Miou(const ConfusionMatrix& matrix);
double Miou(const LabelMap& pred, const LabelMap& ref, int num_classes);

// Fraction of pixels whose predicted label matches the reference.
double Pacc(const LabelMap& pred, const LabelMap& ref);

double ProxyMetric(ProxyKind kind, const LabelMap& pred, const LabelMap& ref,
                   int num_classes);

namespace serial {
ConfusionMatrix BuildConfusionMatrix(const LabelMap& pred, const LabelMap& ref,
                                     int num_classes);
}  // namespace serial

}  // namespace dla

#endif  // DLA_METRICS_H_
