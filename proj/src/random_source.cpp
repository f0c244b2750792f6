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

#include "sketchlab/random_source.hpp"

#include <cmath>

#include "sketchlab/errors.hpp"

namespace sketchlab {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t label) {
  return mix64(mix64(seed ^ 0xD1B54A32D192ED03ULL) + mix64(label));
}

RandomSource::RandomSource(RngSeed seed) : seed_(seed.value) {
  // Expand the 64-bit seed into the xoshiro256++ state with splitmix64.
  std::uint64_t x = seed.value;
  for (auto& w : s_) {
    x = mix64(x);
    w = x;
  }
  // All-zero state is invalid for xoshiro; mix64 of any seed avoids it except
  // for astronomically unlucky expansions.
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t RandomSource::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomSource::uniform01() {
  // 53 random bits shifted into (0,1); the +0.5 keeps both endpoints open.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

bool RandomSource::bernoulli(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ValidationError("bernoulli: p must be in [0,1]");
  }
  if (p == 0.0) return false;
  if (p == 1.0) return true;
  return uniform01() < p;
}

double RandomSource::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ValidationError("exponential: rate must be positive and finite");
  }
  return -std::log(uniform01()) / rate;
}

double RandomSource::laplace(double scale, NoiseMode mode) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ValidationError("laplace: scale must be positive and finite");
  }
  if (mode == NoiseMode::kZero) return 0.0;
  const double u = uniform01();
  if (u < 0.5) return scale * std::log(2.0 * u);
  return -scale * std::log(2.0 * (1.0 - u));
}

RandomSource RandomSource::child(std::uint64_t label) const {
  return RandomSource(RngSeed{derive_seed(seed_, label)});
}

RandomSource RandomSource::child(std::uint64_t a, std::uint64_t b) const {
  return RandomSource(RngSeed{derive_seed(derive_seed(seed_, a), b)});
}

}  // namespace sketchlab
