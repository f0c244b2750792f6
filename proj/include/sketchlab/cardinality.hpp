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
#include <unordered_set>

#include "sketchlab/random_source.hpp"
#include "sketchlab/stream.hpp"
#include "sketchlab/tree_mechanism.hpp"

namespace sketchlab {

// Estimates may be negative once tree noise is in the loop; consumers that
// need nonnegative values clamp.
struct CardEstimate {
  double value = 0.0;  // N̂_t
  std::uint64_t t = 0;
};

// Bernoulli sample of the active keys at a fixed rate p; the estimate is
// |S|/p. An insert refreshes the key's sample status (remove, then re-admit
// with probability p), a delete removes it.
class BernoulliCardSketch {
 public:
  BernoulliCardSketch(double p, RngSeed seed);

  CardEstimate process(const UpdateOp& op);

  double estimate() const {
    return static_cast<double>(sample_.size()) / p_;
  }
  double rate() const { return p_; }
  bool contains(Key key) const { return sample_.count(key) != 0; }
  std::size_t sample_size() const { return sample_.size(); }
  std::size_t max_sample_size() const { return max_sample_; }
  std::uint64_t step() const { return t_; }

 private:
  std::unordered_set<Key> sample_;
  double p_;
  RandomSource rng_;
  std::uint64_t t_ = 0;
  std::size_t max_sample_ = 0;
};

// Fixed-rate sketch composed with a tree mechanism over the sample-size
// deltas (unit sensitivity 2: one +1 and at most one -1 per key epoch).
// Released estimates are noisy sample sizes scaled by 1/p.
class RobustFixedCard {
 public:
  struct Options {
    double p = 1.0;
    std::uint64_t tree_capacity = 0;
    double eps_dp = 1.0;
    NoiseMode mode = NoiseMode::kLive;
  };

  RobustFixedCard(const Options& opt, RngSeed seed);

  CardEstimate process(const UpdateOp& op);

  const BernoulliCardSketch& inner() const { return inner_; }
  const TreeMechanism& tree() const { return tree_; }
  void record_tree_noise(bool on) { tree_.set_noise_recording(on); }

 private:
  BernoulliCardSketch inner_;
  TreeMechanism tree_;
  double prev_size_ = 0.0;
};

// Parameters for the adjustable-rate sketch: sample budget k, trigger margin
// alpha, and the privacy parameter fed to the tree. k is raised to 4*alpha
// when the raw formula lands below that floor (`rescaled` reports it;
// `k_formula` keeps the unadjusted value).
struct CardParams {
  double k = 0.0;
  double k_formula = 0.0;
  double alpha = 0.0;
  double eps_dp = 0.0;
  bool rescaled = false;
};

CardParams card_params(double eps, double delta, std::uint64_t T,
                       double k_const = 1.0, double alpha_const = 1.0);

// Adjustable-rate robust cardinality sketch. The sample is kept at the
// current dyadic rate p; sample-size deltas go through the tree mechanism,
// and whenever the released size exceeds k - alpha the rate is halved and the
// sample thinned in place, reporting the shrink to the tree as well.
class RobustAdaptiveCard {
 public:
  struct Options {
    double p0 = 1.0;
    double k = 0.0;
    double alpha = 0.0;
    double eps_dp = 1.0;
    std::uint64_t tree_capacity = 0;
    NoiseMode mode = NoiseMode::kLive;
    // Guard against a noise-driven spin of the halving loop.
    int max_adjustments_per_step = 64;
  };

  // Horizon sizing that leaves room for the rate-adjustment reports.
  static std::uint64_t recommended_tree_capacity(std::uint64_t total_ops);

  RobustAdaptiveCard(const Options& opt, RngSeed seed);

  CardEstimate process(const UpdateOp& op);

  double current_rate() const { return p_; }
  int halvings() const { return halvings_; }
  bool adjustment_cap_hit() const { return cap_hit_; }
  double last_released_size() const { return last_released_; }
  bool contains(Key key) const { return sample_.count(key) != 0; }
  std::size_t sample_size() const { return sample_.size(); }
  std::size_t max_sample_size() const { return max_sample_; }
  const Options& options() const { return opt_; }
  const TreeMechanism& tree() const { return tree_; }
  void record_tree_noise(bool on) { tree_.set_noise_recording(on); }

 private:
  void update_sample(const UpdateOp& op);

  Options opt_;
  std::unordered_set<Key> sample_;
  double p_;
  RandomSource rng_;
  TreeMechanism tree_;
  double s_prev_ = 0.0;
  double last_released_ = 0.0;
  int halvings_ = 0;
  bool cap_hit_ = false;
  std::uint64_t t_ = 0;
  std::size_t max_sample_ = 0;
};

}  // namespace sketchlab
