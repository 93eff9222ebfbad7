// Copyright 2026 The GlassSeg Authors.
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

#ifndef GLASSSEG_RNG_H_
#define GLASSSEG_RNG_H_

#include <array>
#include <cstdint>

namespace glassseg {

// SplitMix64 step (Steele, Lea, Flood 2014). Advances `state` by the golden
// gamma 0x9E3779B97F4A7C15 and returns the mixed output.
std::uint64_t SplitMix64(std::uint64_t& state);

// Combines a base seed with a stream index into an independent seed:
// the output of one SplitMix64 step from base ^ (stream * golden gamma).
std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream);

// xoshiro256** 1.0 (Blackman, Vigna). The four state words are filled by
// four consecutive SplitMix64 outputs starting from the user seed, so a
// seed reproduces the same stream in any language that implements both
// generators. All derived draws below are defined in terms of Next() only.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t Next();

  // Uniform integer in [0, bound) by rejection: draws x until
  // x >= (2^64 - bound) mod bound, then returns x mod bound. bound > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Uniform integer in [lo, hi], lo <= hi.
  std::int64_t Range(std::int64_t lo, std::int64_t hi);

  // (Next() >> 11) * 2^-53, in [0, 1).
  double Uniform01();

  // Uniform01() < p. Consumes exactly one draw.
  bool Bernoulli(double p);

 private:
  std::array<std::uint64_t, 4> s_;
};

}  // namespace glassseg

#endif  // GLASSSEG_RNG_H_
