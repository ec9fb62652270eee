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
#ifndef DLA_VIZ_H_
#define DLA_VIZ_H_

#include <cstdint>
#include <string>

#include "dla/attack.hpp"
#include "dla/types.hpp"

namespace dla {

// Everything a single-image attack run leaves on disk: clean.png, adv.png,
// and trace.json carrying the configuration, the per-query best-so-far
// trace, and both label maps.
struct AttackRunRecord {
  std::string attack;
  std::string oracle;
  int classes = 0;
  int radius = 0;
  int epsilon = 0;  // 0..255 scale
  std::string proxy;
  std::string reference;
  std::uint64_t seed = 0;
  int budget = 0;
  std::string input_path;
  Image clean;
  AttackResult result;
  LabelMap clean_labels;
  LabelMap adv_labels;
};

void WriteAttackRun(const std::string& run_dir, const AttackRunRecord& record);
AttackRunRecord ReadAttackRun(const std::string& run_dir);

// Renders a saved run: clean image, adversarial image, the amplified
// perturbation ((delta + eps) / (2 eps) as gray, so zero maps to 128), and
// both predictions colored with the fixed class palette. Writes clean.png,
// adv.png, perturbation.png, pred_clean.png, pred_adv.png under out_dir.
void RenderAttackRun(const std::string& run_dir, const std::string& out_dir);

}  // namespace dla

#endif  // DLA_VIZ_H_
