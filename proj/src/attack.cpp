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
#include "dla/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace dla {

namespace {

struct Baseline {
  ReferenceLabels ref;
  double value = 1.0;
};

// The clean prediction doubles as the baseline proxy query, so resolving the
// reference costs exactly one query in either mode.
Baseline ResolveBaseline(BudgetedOracle& oracle, const Image& image,
                         const ReferenceSpec& ref_spec, ProxyKind proxy) {
  const LabelMap clean = oracle.Query(image);
  Baseline baseline;
  if (ref_spec.mode == ReferenceMode::kGroundTruth) {
    if (!ref_spec.ground_truth.has_value()) {
      throw std::invalid_argument(
          "ground-truth reference requested but no labels supplied");
    }
    if (ref_spec.ground_truth->height() != image.height() ||
        ref_spec.ground_truth->width() != image.width()) {
      throw std::invalid_argument("ground-truth labels do not match image");
    }
    baseline.ref = {ReferenceMode::kGroundTruth, *ref_spec.ground_truth};
  } else {
    baseline.ref = {ReferenceMode::kCleanPrediction, clean};
  }
  baseline.value = ProxyMetric(proxy, clean, baseline.ref.labels,
                               oracle.inner().num_classes());
  oracle.LogProxy(baseline.value);
  return baseline;
}

// Iteration queries spent so far, excluding the baseline.
int IterationsSpent(const BudgetedOracle& oracle) { return oracle.used() - 1; }

bool CanQuery(const BudgetedOracle& oracle, const AttackConfig& config) {
  return oracle.remaining() > 0 && IterationsSpent(oracle) < config.budget;
}

SignMask MultiplyMasks(const SignMask& a, const SignMask& b) {
  SignMask out = a;
  for (int r = 0; r < a.height(); ++r) {
    for (int c = 0; c < a.width(); ++c) {
      out.at(r, c) = static_cast<std::int8_t>(a.at(r, c) * b.at(r, c));
    }
  }
  return out;
}

void AdvanceStripe(AttackState& state) {
  ++state.stripe_index;
  if (state.stripe_index == (std::int64_t{1} << state.level)) {
    state.stripe_index = 0;
    ++state.level;
  }
}

}  // namespace

ExploreStrategy ParseExploreStrategy(const std::string& name) {
  if (name == "horizontal") return ExploreStrategy::kHorizontalOnly;
  if (name == "vertical") return ExploreStrategy::kVerticalOnly;
  if (name == "alternating") return ExploreStrategy::kAlternating;
  throw std::invalid_argument("unknown explore strategy: " + name);
}

std::string ToString(ExploreStrategy strategy) {
  switch (strategy) {
    case ExploreStrategy::kHorizontalOnly:
      return "horizontal";
    case ExploreStrategy::kVerticalOnly:
      return "vertical";
    default:
      return "alternating";
  }
}

void AttackConfig::Validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  if (budget < 1) {
    throw std::invalid_argument("budget must be at least 1");
  }
  if (!(explore_fraction > 0.0 && explore_fraction < 1.0)) {
    throw std::invalid_argument("explore_fraction must lie in (0, 1)");
  }
}

int DlaExploreIterations(const AttackConfig& config) {
  const int iterations = static_cast<int>(
      std::ceil(config.explore_fraction * config.budget - 1e-9));
  return std::clamp(iterations, 1, config.budget);
}

LinearNoise SampleLinearNoise(Rng& rng, ExploreStrategy strategy, int t,
                              int height, int width, double epsilon) {
  NoiseDirection direction = NoiseDirection::kHorizontal;
  switch (strategy) {
    case ExploreStrategy::kHorizontalOnly:
      direction = NoiseDirection::kHorizontal;
      break;
    case ExploreStrategy::kVerticalOnly:
      direction = NoiseDirection::kVertical;
      break;
    case ExploreStrategy::kAlternating:
      direction = (t % 2 == 1) ? NoiseDirection::kHorizontal
                               : NoiseDirection::kVertical;
      break;
  }
  LinearNoise noise;
  noise.direction = direction;
  noise.epsilon = epsilon;
  const int length =
      direction == NoiseDirection::kHorizontal ? height : width;
  noise.signs.resize(length);
  for (int i = 0; i < length; ++i) {
    noise.signs[i] = rng.Sign();
  }
  return noise;
}

AttackState DlaInit(BudgetedOracle& oracle, const Image& image,
                    const ReferenceSpec& ref_spec, const AttackConfig& config,
                    ReferenceLabels& ref_out) {
  config.Validate();
  const Baseline baseline =
      ResolveBaseline(oracle, image, ref_spec, config.proxy);
  ref_out = baseline.ref;

  AttackState state;
  state.l_min = baseline.value;
  state.committed = SignMask::Ones(image.height(), image.width());
  state.mask = state.committed;
  state.best_mask = state.committed;
  state.rng = Rng(config.seed);
  state.trace.push_back({oracle.used(), baseline.value});
  return state;
}

void DlaExplore(BudgetedOracle& oracle, const Image& image,
                const ReferenceLabels& ref, const AttackConfig& config,
                AttackState& state, int iterations) {
  for (int t = 1; t <= iterations; ++t) {
    if (!CanQuery(oracle, config)) return;
    const LinearNoise noise =
        SampleLinearNoise(state.rng, config.explore_strategy, t,
                          image.height(), image.width(), config.epsilon);
    const Image candidate = ApplyPerturbation(
        image, ExpandLinearNoise(noise, image.channels(), image.height(),
                                 image.width()));
    const double value = ProxyValue(oracle, candidate, ref, config.proxy);
    if (value < state.l_min) {
      state.l_min = value;
      state.best_noise = noise;
      state.direction = DirectionFlag(noise.direction);
    }
    state.trace.push_back({oracle.used(), state.l_min});
  }
}

void DlaCalibrate(BudgetedOracle& oracle, const Image& image,
                  const ReferenceLabels& ref, const AttackConfig& config,
                  AttackState& state) {
  if (!state.best_noise.has_value()) {
    // Zero perturbation: flipping it cannot change the proxy, so spend
    // nothing.
    return;
  }
  const int height = image.height();
  const int width = image.width();
  const int dim = state.direction == 1 ? height : width;
  const int fold_level = CeilLog2(dim) + 1;

  while (CanQuery(oracle, config)) {
    StripeBounds bounds;
    while (true) {
      if (state.level == fold_level) {
        // Epoch over: commit the working mask and restart the hierarchy.
        state.committed = MultiplyMasks(state.committed, state.mask);
        state.mask = SignMask::Ones(height, width);
        state.best_mask = state.mask;
        state.stripe_index = 0;
        state.level = 0;
      }
      bounds = ComputeStripeBounds(state.direction, state.level,
                                   state.stripe_index, height, width);
      if (!bounds.Empty()) break;
      AdvanceStripe(state);  // empty stripe, costs nothing
    }

    state.mask = FlipStripe(std::move(state.mask), bounds);
    const Image candidate =
        ApplySignedNoise(image, *state.best_noise, state.committed,
                         state.mask);
    const double value = ProxyValue(oracle, candidate, ref, config.proxy);
    if (value < state.l_min) {
      state.l_min = value;
      state.best_mask = state.mask;
    } else {
      state.mask = FlipStripe(std::move(state.mask), bounds);
    }
    state.trace.push_back({oracle.used(), state.l_min});
    AdvanceStripe(state);
  }
}

Image DlaCurrentBest(const Image& image, const AttackState& state) {
  if (!state.best_noise.has_value()) return image;
  return ApplySignedNoise(image, *state.best_noise, state.committed,
                          state.best_mask);
}

namespace {

AttackResult FinishDla(BudgetedOracle& oracle, const Image& image,
                       AttackState& state) {
  AttackResult result;
  result.adversarial = DlaCurrentBest(image, state);
  result.final_proxy = state.l_min;
  result.queries_used = oracle.used();
  result.trace = std::move(state.trace);
  return result;
}

}  // namespace

AttackResult DlaAttack(BudgetedOracle& oracle, const Image& image,
                       const ReferenceSpec& ref_spec,
                       const AttackConfig& config) {
  ReferenceLabels ref;
  AttackState state = DlaInit(oracle, image, ref_spec, config, ref);
  DlaExplore(oracle, image, ref, config, state, DlaExploreIterations(config));
  DlaCalibrate(oracle, image, ref, config, state);
  return FinishDla(oracle, image, state);
}

AttackResult DlaExplorationAttack(BudgetedOracle& oracle, const Image& image,
                                  const ReferenceSpec& ref_spec,
                                  const AttackConfig& config) {
  ReferenceLabels ref;
  AttackState state = DlaInit(oracle, image, ref_spec, config, ref);
  DlaExplore(oracle, image, ref, config, state, config.budget);
  return FinishDla(oracle, image, state);
}

AttackResult RandomAttack(BudgetedOracle& oracle, const Image& image,
                          const ReferenceSpec& ref_spec,
                          const AttackConfig& config) {
  config.Validate();
  const Baseline baseline =
      ResolveBaseline(oracle, image, ref_spec, config.proxy);

  AttackResult result;
  result.trace.push_back({oracle.used(), baseline.value});
  result.final_proxy = baseline.value;

  Image current = image;
  Rng rng(config.seed);
  const double step = config.epsilon / 16.0;

  while (CanQuery(oracle, config)) {
    Image candidate(image.channels(), image.height(), image.width());
    for (std::size_t i = 0; i < image.size(); ++i) {
      const double noise = (2.0 * rng.Uniform01() - 1.0) * step;
      const double lo = std::max(0.0, image.data()[i] - config.epsilon);
      const double hi = std::min(1.0, image.data()[i] + config.epsilon);
      candidate.data()[i] =
          std::min(hi, std::max(lo, current.data()[i] + noise));
    }
    const double value =
        ProxyValue(oracle, candidate, baseline.ref, config.proxy);
    if (value < result.final_proxy) {
      result.final_proxy = value;
      current = std::move(candidate);
    }
    result.trace.push_back({oracle.used(), result.final_proxy});
  }

  result.adversarial = std::move(current);
  result.queries_used = oracle.used();
  return result;
}

const std::map<std::string, AttackFn>& AttackRegistry() {
  static const std::map<std::string, AttackFn> registry = {
      {"dla", DlaAttack},
      {"random", RandomAttack},
      {"dla-explore", DlaExplorationAttack},
  };
  return registry;
}

}  // namespace dla
