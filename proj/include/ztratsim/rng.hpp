// Copyright 2026 The ztratsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace ztratsim {

/// PCG32 (XSH-RR 64/32): 64-bit LCG state, permuted 32-bit output.
/// Every simulation draw goes through this generator so that identical
/// seeds reproduce identical event sequences on every platform. The
/// multiplier and output permutation are the reference constants; do not
/// change them without versioning the scenario format.
class Pcg32 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kDefaultStream = 1442695040888963407ULL;

  explicit Pcg32(std::uint64_t seed, std::uint64_t stream = kDefaultStream)
      : state_(0), inc_((stream << 1u) | 1u) {
    next_u32();
    state_ += seed;
    next_u32();
  }

  std::uint32_t next_u32() {
    const std::uint64_t old = state_;
    state_ = old * kMultiplier + inc_;
    const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
    const auto rot = static_cast<std::uint32_t>(old >> 59u);
    return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
  }

  std::uint64_t next_u64() {
    const std::uint64_t hi = next_u32();
    return (hi << 32u) | next_u32();
  }

  /// Uniform double in [0, 1) with 53 significant bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11u) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

  bool bernoulli(double p) { return next_double() < p; }

 private:
  std::uint64_t state_;
  std::uint64_t inc_;
};

}  // namespace ztratsim
