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
#ifndef DLA_ATTACK_H_
#define DLA_ATTACK_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dla/metrics.hpp"
#include "dla/oracle.hpp"
#include "dla/perturb.hpp"
#include "dla/rng.hpp"
#include "dla/types.hpp"

namespace dla {

// Which direction the exploration phase samples linear noises in.
enum class ExploreStrategy {
  kHorizontalOnly,
  kVerticalOnly,
  kAlternating,  // odd iterations horizontal, even vertical
};

ExploreStrategy ParseExploreStrategy(const std::string& name);
std::string ToString(ExploreStrategy strategy);

struct AttackConfig {
  double epsilon = 8.0 / 255.0;  // max perturbation on the [0, 1] scale
  int budget = 200;              // iteration queries T; the baseline adds one
  ProxyKind proxy = ProxyKind::kMiou;
  std::uint64_t seed = 0;
  double explore_fraction = 0.2;  // exploration runs ceil(fraction * budget)
  ExploreStrategy explore_strategy = ExploreStrategy::kAlternating;

  void Validate() const;  // throws std::invalid_argument
};

struct TracePoint {
  int query = 0;      // cumulative oracle queries when recorded
  double best = 0.0;  // best proxy value so far

  friend bool operator==(const TracePoint& a, const TracePoint& b) = default;
};

struct AttackResult {
  Image adversarial;
  double final_proxy = 1.0;
  int queries_used = 0;
  std::vector<TracePoint> trace;
};

// Full mutable state of a discrete-linear-attack run. The kept perturbation
// is stored structured: dense(best_noise) * committed * best_mask, so memory
// stays O(H + W + HW) instead of O(CHW).
struct AttackState {
  double l_min = 1.0;
  std::optional<LinearNoise> best_noise;  // empty means zero perturbation
  SignMask committed;                     // sign flips folded in at epoch ends
  SignMask mask;                          // working mask M
  SignMask best_mask;                     // last accepted mask
  int direction = 1;                      // 1 row stripes, 0 column stripes
  std::int64_t stripe_index = 0;
  int level = 0;
  Rng rng{0};
  std::vector<TracePoint> trace;
};

// One budgeted query plus bookkeeping: resolves the reference (the clean
// prediction doubles as the baseline query) and seeds l_min and the trace.
AttackState DlaInit(BudgetedOracle& oracle, const Image& image,
                    const ReferenceSpec& ref_spec, const AttackConfig& config,
                    ReferenceLabels& ref_out);

// The linear noise sampled at exploration iteration t (1-based): alternating
// draws horizontal when t is odd. Consumes one sign draw per line.
LinearNoise SampleLinearNoise(Rng& rng, ExploreStrategy strategy, int t,
                              int height, int width, double epsilon);

// Exploration: samples discrete linear noises, queries each, and keeps the
// one with the smallest proxy. Stops early if the budget runs out.
void DlaExplore(BudgetedOracle& oracle, const Image& image,
                const ReferenceLabels& ref, const AttackConfig& config,
                AttackState& state, int iterations);

// Calibration: hierarchically flips sign stripes of the kept noise, keeping
// each flip only on a strict proxy decrease, folding the mask into the kept
// perturbation after every full stripe hierarchy. Runs until the budget is
// spent. Empty stripes (non-power-of-two dims) are skipped for free.
void DlaCalibrate(BudgetedOracle& oracle, const Image& image,
                  const ReferenceLabels& ref, const AttackConfig& config,
                  AttackState& state);

// clamp(x + best_noise * committed * best_mask, 0, 1); the clean image while
// exploration has not accepted anything.
Image DlaCurrentBest(const Image& image, const AttackState& state);

int DlaExploreIterations(const AttackConfig& config);

AttackResult DlaAttack(BudgetedOracle& oracle, const Image& image,
                       const ReferenceSpec& ref_spec,
                       const AttackConfig& config);

// The exploration phase run for the whole budget (the discrete-noise arm of
// the noise-type study).
AttackResult DlaExplorationAttack(BudgetedOracle& oracle, const Image& image,
                                  const ReferenceSpec& ref_spec,
                                  const AttackConfig& config);

// Baseline random search: uniform noise in [-eps/16, +eps/16] per element,
// projected onto the eps-ball around the clean image and [0, 1], accepted
// only on a strict proxy decrease.
AttackResult RandomAttack(BudgetedOracle& oracle, const Image& image,
                          const ReferenceSpec& ref_spec,
                          const AttackConfig& config);

using AttackFn = std::function<AttackResult(
    BudgetedOracle&, const Image&, const ReferenceSpec&, const AttackConfig&)>;

// Built-in attacks by name: "dla", "random", "dla-explore". The registry is
// the plugin surface for third-party attacks sharing the same contract.
const std::map<std::string, AttackFn>& AttackRegistry();

}  // namespace dla

#endif  // DLA_ATTACK_H_
