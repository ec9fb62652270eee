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
#ifndef DLA_ORACLE_H_
#define DLA_ORACLE_H_

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dla/metrics.hpp"
#include "dla/types.hpp"

namespace dla {

// Connection, spawn, or timeout failure talking to a remote oracle.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, int attempts = 1)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_ = 1;
};

// The remote peer answered, but not with a well-formed response.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a query is attempted with the budget already spent.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inputs cross the query boundary at 32-bit precision (the wire format), so
// an in-process oracle and a remote one serving the same model agree exactly.
inline double WireQuantize(double v) {
  return static_cast<double>(static_cast<float>(v));
}

// The decision boundary: a label-only query contract. Implementations reveal
// per-pixel class ids and nothing else, and must be deterministic (built-ins
// are; remote oracles are best-effort).
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual LabelMap Query(const Image& image) const = 0;
  virtual int num_classes() const = 0;
  virtual const std::string& name() const = 0;
};

// Wraps an oracle with a hard query cap. used() counts successful label
// responses only; a query attempted at the cap raises BudgetError without
// incrementing.
class BudgetedOracle {
 public:
  BudgetedOracle(const Oracle& inner, int budget)
      : inner_(&inner), budget_(budget) {}

  LabelMap Query(const Image& image) {
    if (used_ >= budget_) {
      throw BudgetError("query budget of " + std::to_string(budget_) +
                        " exhausted");
    }
    LabelMap labels = inner_->Query(image);
    ++used_;
    return labels;
  }

  int used() const { return used_; }
  int budget() const { return budget_; }
  int remaining() const { return budget_ - used_; }
  const Oracle& inner() const { return *inner_; }

  const std::vector<double>& proxy_log() const { return proxy_log_; }
  void LogProxy(double value) { proxy_log_.push_back(value); }

 private:
  const Oracle* inner_;
  int budget_ = 0;
  int used_ = 0;
  std::vector<double> proxy_log_;
};

// What the per-image proxy compares against.
enum class ReferenceMode {
  kCleanPrediction,  // the model's own labels on the clean image
  kGroundTruth,      // labels loaded from disk
};

ReferenceMode ParseReferenceMode(const std::string& name);
std::string ToString(ReferenceMode mode);

// A resolved reference label map (after any baseline query).
struct ReferenceLabels {
  ReferenceMode source = ReferenceMode::kCleanPrediction;
  LabelMap labels;
};

// How an attack should obtain its reference; ground_truth must be present
// when mode is kGroundTruth.
struct ReferenceSpec {
  ReferenceMode mode = ReferenceMode::kCleanPrediction;
  std::optional<LabelMap> ground_truth;
};

// One budgeted query followed by the kind-selected metric against ref.
double ProxyValue(BudgetedOracle& oracle, const Image& image,
                  const ReferenceLabels& ref, ProxyKind kind);

// Builds an oracle from a spec string: "threshold" | "palette" | "context" |
// "cmd:<program>" | "tcp:<host>:<port>". classes and radius configure the
// built-ins; a remote oracle reports its own class count.
std::unique_ptr<Oracle> MakeOracle(const std::string& spec, int classes,
                                   int radius);

}  // namespace dla

#endif  // DLA_ORACLE_H_
