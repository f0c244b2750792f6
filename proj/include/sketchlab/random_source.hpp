/*
 * Copyright 2026 The sketchlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cstdint>

namespace sketchlab {

struct RngSeed {
  std::uint64_t value = 0;
};

// Zero mode turns every Laplace draw into an exact 0 while leaving
// bernoulli/exponential draws untouched. Used to run the DP machinery
// noiselessly in tests and experiments.
enum class NoiseMode { kLive, kZero };

// splitmix64 finalizer; bijective on u64.
std::uint64_t mix64(std::uint64_t x);

// Pure derivation of a child seed from (seed, label). Distinct labels give
// unrelated streams; the derivation does not depend on draws already made.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label);

// Deterministic seeded random source (xoshiro256++ seeded via splitmix64).
// Identical seeds give identical draw sequences across runs and platforms;
// distribution draws are hand-rolled (inverse CDF) so they do not depend on
// the standard library's unspecified algorithms. Bit-exactness of the
// floating-point draws across different libm implementations is not promised,
// only within one platform.
class RandomSource {
 public:
  explicit RandomSource(RngSeed seed);

  std::uint64_t next_u64();

  // Uniform in the open interval (0, 1).
  double uniform01();

  // Returns true with probability p. p outside [0,1] is rejected.
  bool bernoulli(double p);

  // Exp with the given rate (mean 1/rate). rate <= 0 is rejected.
  double exponential(double rate);

  // Symmetric Laplace with the given scale, via inverse CDF from one uniform
  // draw. In Zero mode returns exactly 0 without consuming a draw.
  double laplace(double scale, NoiseMode mode = NoiseMode::kLive);

  // Child sources for per-trial / per-level streams. Derived from the
  // original seed and the label only.
  RandomSource child(std::uint64_t label) const;
  RandomSource child(std::uint64_t a, std::uint64_t b) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> s_;
};

}  // namespace sketchlab
