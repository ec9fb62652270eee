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
#ifndef DLA_RNG_H_
#define DLA_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace dla {

// Seeded mt19937_64 with fixed derivations on the raw 64-bit stream, so runs
// reproduce bit-identically across platforms and standard libraries (the
// std:: distribution adaptors are implementation-defined and never used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) from the top 53 bits of one draw.
  double Uniform01() { return (NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) {
    return lo + (hi - lo) * Uniform01();
  }

  // A fair {-1, +1} draw from the low bit; consumes one output.
  std::int8_t Sign() { return (NextU64() & 1) != 0 ? 1 : -1; }

 private:
  std::mt19937_64 engine_;
};

// FNV-1a over attack name, sample id, and run seed. Keys every attack run to
// its own stream, so adding attacks or reordering samples never perturbs the
// noise another run sees.
inline std::uint64_t DeriveStreamSeed(std::string_view attack,
                                      std::string_view sample_id,
                                      std::uint64_t seed) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](unsigned char byte) {
    hash ^= byte;
    hash *= 0x100000001b3ULL;
  };
  for (char c : attack) mix(static_cast<unsigned char>(c));
  mix(0);
  for (char c : sample_id) mix(static_cast<unsigned char>(c));
  mix(0);
  for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
  return hash;
}

}  // namespace dla

#endif  // DLA_RNG_H_
