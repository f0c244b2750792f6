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

#include <cstdint>
#include <memory>
#include <vector>

#include "sketchlab/bernstein_function.hpp"
#include "sketchlab/cardinality.hpp"
#include "sketchlab/random_source.hpp"
#include "sketchlab/stream.hpp"
#include "sketchlab/sum_sketch.hpp"

namespace sketchlab {

// Level ladder for the sum-plus-cardinality reduction of a Bernstein
// statistic. Geometric targets v_i = (1+eps)^{-i} V(tau) are inverted through
// the tail V to thresholds tau_1 < ... < tau_m with weights
// alpha_i = v_{i-1} - v_i; the ladder is truncated once v_m falls below
// (eps/T) f(delta_min). The head coefficient alpha_0 = ∫_0^tau a(t) t dt
// multiplies a plain sum estimate.
struct LevelPlan {
  double tau = 0.0;  // cutoff tau_0
  int r = 1;         // output keys per input key
  std::vector<double> levels;
  std::vector<double> weights;
  double head_weight = 0.0;  // alpha_0
  double v_floor = 0.0;
  int m() const { return static_cast<int>(levels.size()); }
};

LevelPlan plan_levels(const BernsteinFunction& f, double eps, std::uint64_t T,
                      double delta_min, double delta_max, int r = 64);

// Largest t with V(t) >= target (log-domain bisection).
double invert_tail(const BernsteinFunction& f, double target);

// The randomized element map alone. An increment (x, delta) draws an
// independent y ~ Exp(rate delta) per output copy k and level i and emits
// Insert(H(x,k)) to stream E_i iff y < tau_i, so the per-element emission
// probability is 1 - e^{-delta tau_i}. A reset emits Delete(H(x,k)) to every
// level for every copy.
class BernsteinElementMap {
 public:
  BernsteinElementMap(LevelPlan plan, double delta_min, double delta_max,
                      RngSeed seed);

  // Returns per-level emissions (index i-1 holds stream E_i's ops).
  std::vector<std::vector<UpdateOp>> map(const UpdateOp& op);

  const LevelPlan& plan() const { return plan_; }

 private:
  LevelPlan plan_;
  double delta_min_;
  double delta_max_;
  RandomSource rng_;
};

// Composite sketch: the raw stream feeds a prefix-max sum sketch, and a
// randomized element map emits per-level cardinality streams E_1..E_m handled
// by robust adaptive cardinality sketches. An increment (x, delta) emits, for
// each of r output keys H(x,k) and each level i, an Insert with probability
// 1 - e^{-delta * tau_i}; resets delete every H(x,k) from every level, which
// undoes the key's contribution exactly. The published estimate is
//   alpha_0 * Sum + (1/r) * Σ alpha_i * Distinct(E_i),
// clamped to 0 below (1-eps) f(delta_min).
class BernsteinSketch {
 public:
  struct Options {
    BernsteinFunctionId f = SoftCapFn{1.0};
    double eps = 0.25;
    double delta = 0.05;
    std::uint64_t T = 1;  // bound on Inc operations
    double delta_min = 1.0;
    double delta_max = 1.0;
    int r = 64;
    NoiseMode mode = NoiseMode::kLive;
  };

  BernsteinSketch(const Options& opt, RngSeed seed);

  // Validates, maps the op onto the output streams, feeds all sub-sketches,
  // and returns the per-level emissions (index i-1 holds stream E_i's ops).
  // Accepts Inc (delta within [delta_min, delta_max]) and ResetKey only.
  std::vector<std::vector<UpdateOp>> map_update(const UpdateOp& op);

  // map_update + current estimate.
  double process(const UpdateOp& op);

  double estimate() const;

  const LevelPlan& plan() const { return map_.plan(); }
  const BernsteinFunction& function() const { return f_; }
  const PrefixMaxSum& sum_sketch() const { return *sum_; }
  const RobustAdaptiveCard& card_sketch(int level) const {
    return *cards_[level - 1];
  }
  std::uint64_t ops_seen() const { return ops_; }

  // Injective output-key encoding; requires key < 2^56 and k in [1, 256].
  static Key output_key(Key key, int k);

 private:
  Options opt_;
  BernsteinFunction f_;
  BernsteinElementMap map_;
  std::unique_ptr<PrefixMaxSum> sum_;
  std::vector<std::unique_ptr<RobustAdaptiveCard>> cards_;
  std::vector<double> card_last_;
  std::uint64_t ops_ = 0;
};

}  // namespace sketchlab
