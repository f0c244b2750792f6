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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "sketchlab/errors.hpp"
#include "sketchlab/random_source.hpp"
#include "test_common.hpp"

using namespace sketchlab;

namespace {
constexpr int kDraws = 1'000'000;
}

TEST_CASE("bernoulli endpoints and validation") {
  RandomSource rng(RngSeed{42});
  for (int i = 0; i < 1000; ++i) {
    CHECK(rng.bernoulli(1.0));
    CHECK_FALSE(rng.bernoulli(0.0));
  }
  CHECK_THROWS_AS(rng.bernoulli(-0.1), ValidationError);
  CHECK_THROWS_AS(rng.bernoulli(1.1), ValidationError);
}

TEST_CASE("bernoulli empirical mean at p=0.3") {
  RandomSource rng(RngSeed{43});
  long long hits = 0;
  for (int i = 0; i < kDraws; ++i) hits += rng.bernoulli(0.3);
  const double m = static_cast<double>(hits) / kDraws;
  CHECK(std::abs(m - 0.3) < 0.002);
}

TEST_CASE("exponential moments and tails") {
  RandomSource rng(RngSeed{44});
  double sum = 0.0;
  for (int i = 0; i < kDraws; ++i) sum += rng.exponential(1.0);
  CHECK(std::abs(sum / kDraws - 1.0) < 0.01);

  long long below_median = 0;
  const double median2 = std::log(2.0) / 2.0;
  for (int i = 0; i < kDraws; ++i) below_median += rng.exponential(2.0) < median2;
  CHECK(std::abs(static_cast<double>(below_median) / kDraws - 0.5) < 0.005);

  for (int i = 0; i < 1000; ++i) {
    const double x = rng.exponential(1e9);
    CHECK(x >= 0.0);
    CHECK(std::isfinite(x));
  }
  CHECK_THROWS_AS(rng.exponential(0.0), ValidationError);
  CHECK_THROWS_AS(rng.exponential(-1.0), ValidationError);
}

TEST_CASE("laplace zero mode, symmetry and tail mass") {
  RandomSource rng(RngSeed{45});
  for (int i = 0; i < 100; ++i) CHECK(rng.laplace(5.0, NoiseMode::kZero) == 0.0);

  double sum = 0.0;
  long long tail = 0;
  const double ln10 = std::log(10.0);
  for (int i = 0; i < kDraws; ++i) {
    const double x = rng.laplace(1.0, NoiseMode::kLive);
    sum += x;
    tail += std::abs(x) > ln10;
  }
  CHECK(std::abs(sum / kDraws) < 0.01);
  CHECK(std::abs(static_cast<double>(tail) / kDraws - 0.1) < 0.003);

  CHECK_THROWS_AS(rng.laplace(0.0, NoiseMode::kLive), ValidationError);
  CHECK_THROWS_AS(rng.laplace(-2.0, NoiseMode::kZero), ValidationError);
}

TEST_CASE("identical seeds give identical sequences") {
  RandomSource a(RngSeed{123456789});
  RandomSource b(RngSeed{123456789});
  for (int i = 0; i < 10000; ++i) CHECK(a.next_u64() == b.next_u64());
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform01() == b.uniform01());
    CHECK(a.exponential(0.7) == b.exponential(0.7));
    CHECK(a.laplace(2.5) == b.laplace(2.5));
  }
}

TEST_CASE("child derivation is pure and label-sensitive") {
  RandomSource root(RngSeed{99});
  RandomSource c1 = root.child(1);
  RandomSource c2 = root.child(2);
  CHECK(c1.next_u64() != c2.next_u64());

  // Derivation ignores draws already made from the parent.
  RandomSource root2(RngSeed{99});
  for (int i = 0; i < 57; ++i) root2.next_u64();
  RandomSource c1_again = root2.child(1);
  RandomSource c1_ref = RandomSource(RngSeed{99}).child(1);
  for (int i = 0; i < 100; ++i) CHECK(c1_again.next_u64() == c1_ref.next_u64());

  // Two-label children differ when labels swap.
  RandomSource a = root.child(3, 4);
  RandomSource b = root.child(4, 3);
  CHECK(a.next_u64() != b.next_u64());
}
