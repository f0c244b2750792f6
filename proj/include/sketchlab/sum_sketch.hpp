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
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sketchlab/random_source.hpp"
#include "sketchlab/stream.hpp"
#include "sketchlab/tree_mechanism.hpp"

namespace sketchlab {

struct SumEstimate {
  double value = 0.0;  // F̂_t
  std::uint64_t t = 0;
};

// Sample-and-hold resettable sum sketch with fixed threshold tau.
//
// An increment to an untracked key draws r ~ Exp(mean tau); the key enters
// the sample iff r < delta, with counter delta - r. Tracked keys accumulate
// increments exactly. The estimate is Σ_{i in S} (tau + c_i), unbiased for
// the true sum. Resets drop the key, so a fresh draw guards its next epoch.
class ResettableSumSketch {
 public:
  ResettableSumSketch(double tau, RngSeed seed);

  SumEstimate process(const UpdateOp& op);

  double estimate() const { return estimate_; }
  double tau() const { return tau_; }
  bool contains(Key key) const { return counters_.count(key) != 0; }
  const std::unordered_map<Key, double>& sample() const { return counters_; }
  std::size_t sample_size() const { return counters_.size(); }
  std::size_t max_sample_size() const { return max_sample_; }
  std::uint64_t step() const { return t_; }

  // Test hook: the next entry draw returns r instead of sampling.
  void force_next_entry(double r) { forced_entry_ = r; }

 private:
  double draw_entry();
  void inc(Key key, double delta);
  void remove(Key key);

  std::unordered_map<Key, double> counters_;
  double tau_;
  double estimate_ = 0.0;
  RandomSource rng_;
  std::optional<double> forced_entry_;
  std::uint64_t t_ = 0;
  std::size_t max_sample_ = 0;
};

// Entry-threshold view of the same process: one Exp(mean tau) threshold per
// (key, reset epoch), drawn when the epoch first sees an increment; the key
// is sampled exactly while its accumulated value exceeds the threshold.
// Distributionally identical to ResettableSumSketch (memorylessness), but
// stores every active key, so it serves as an analysis/testing vehicle, not
// as a small sketch.
class EntryThresholdSumSketch {
 public:
  EntryThresholdSumSketch(double tau, RngSeed seed);

  SumEstimate process(const UpdateOp& op);

  double estimate() const;
  bool sampled(Key key) const;
  double threshold_of(Key key) const;  // NaN when no epoch is open

  // Test hook: draw thresholds from Exp(mean tau) conditioned on <= cap.
  void set_threshold_cap(double cap) { cap_ = cap; }

 private:
  struct Epoch {
    double value = 0.0;
    double threshold = 0.0;
  };

  double draw_threshold();
  void inc(Key key, double delta);

  std::unordered_map<Key, Epoch> state_;
  double tau_;
  RandomSource rng_;
  std::optional<double> cap_;
  std::uint64_t t_ = 0;
};

// Fixed-threshold robust sum sketch. Each sampled key's estimated
// contribution tau + c_x is split at the clip level B into a protected part
// min(B, tau + c_x) and an excess part max(0, tau + c_x - B). Protected
// deltas, scaled by 1/B, stream through a tree mechanism with unit
// sensitivity 2 (a key epoch contributes at most +1 total and one negative
// update); the release is B * (noisy prefix) + excess.
class RobustSumFixed {
 public:
  struct Options {
    double tau = 1.0;
    double clip = 1.0;  // B
    std::uint64_t tree_capacity = 0;
    double eps_dp = 1.0;
    NoiseMode mode = NoiseMode::kLive;
  };

  // B = tau * ln(T / delta).
  static double clip_for(double tau, std::uint64_t T, double delta);

  RobustSumFixed(const Options& opt, RngSeed seed);

  SumEstimate process(const UpdateOp& op);

  double protected_part() const { return p_hat_; }
  double excess_part() const { return d_hat_; }
  double clip() const { return clip_; }
  const ResettableSumSketch& inner() const { return inner_; }
  const TreeMechanism& tree() const { return tree_; }
  void record_tree_noise(bool on) { tree_.set_noise_recording(on); }

  // Test-mode accounting of per-(key, epoch) |u| mass fed to the tree.
  void enable_unit_ledger(bool on) { ledger_on_ = on; }
  double max_unit_mass() const;

  // Test hook, forwarded to the wrapped sketch.
  void force_next_entry(double r) { inner_.force_next_entry(r); }

 private:
  std::pair<double, double> split_of(Key key) const;
  void ledger_add(Key key, double mass);
  void ledger_close_epoch(Key key);

  ResettableSumSketch inner_;
  TreeMechanism tree_;
  double clip_;
  double p_hat_ = 0.0;
  double d_hat_ = 0.0;
  bool ledger_on_ = false;
  std::unordered_map<Key, std::uint64_t> epoch_;
  std::map<std::pair<Key, std::uint64_t>, double> unit_mass_;
};

// Thresholds and clip levels for the switching ladder: instance k covers
// statistic scale 2^k.
struct SumParams {
  std::vector<double> tau;   // tau_1..tau_L
  std::vector<double> clip;  // B_1..B_L
  double eps_dp = 0.0;
};

SumParams sum_params(double eps, double delta, std::uint64_t T,
                     double scale_max, double tau_const = 1.0);

// Prefix-max robust sum via sketch switching: a ladder of fixed-threshold
// robust instances at dyadic scales. Instance k latches on when its estimate
// first reaches 2^k; the largest latched instance reports, and instances
// below it are released for good.
class PrefixMaxSum {
 public:
  struct Options {
    double eps = 0.2;
    double delta = 0.05;
    std::uint64_t T = 2;
    double scale_max = 2.0;
    double tau_const = 1.0;  // multiplier on the threshold ladder
    std::uint64_t tree_capacity = 0;
    NoiseMode mode = NoiseMode::kLive;
  };

  PrefixMaxSum(const Options& opt, RngSeed seed);

  SumEstimate process(const UpdateOp& op);

  double estimate() const { return estimate_; }
  int reporting_index() const { return active_; }  // 0 = none latched
  int level_count() const { return static_cast<int>(slots_.size()); }
  bool activated(int k) const { return slots_[k - 1].activated; }
  bool dropped(int k) const { return slots_[k - 1].sketch == nullptr; }
  const SumParams& params() const { return params_; }
  std::size_t live_sample_size() const;

 private:
  struct Slot {
    std::unique_ptr<RobustSumFixed> sketch;
    bool activated = false;
    double last = 0.0;
  };

  SumParams params_;
  std::vector<Slot> slots_;
  int active_ = 0;
  double estimate_ = 0.0;
  std::uint64_t t_ = 0;
};

}  // namespace sketchlab
