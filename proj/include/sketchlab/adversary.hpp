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
#include <optional>
#include <vector>

#include "sketchlab/stream.hpp"

namespace sketchlab {

// Membership signal used by the attacks: did the released estimate move up
// by more than tol? Against an exact |S|/p estimator a sampled insert moves
// the estimate by exactly 1/p, so tol = 1/(2p) - eps_machine separates the
// cases; against a noisy release this degrades toward a coin flip.
bool detect_change(double prev, double cur, double tol);

double default_detect_tol(double p);

// An input source driving one duel: emits at most one op per step and sees
// only the released estimate stream. next() returns nothing once exhausted.
class OpSource {
 public:
  virtual ~OpSource() = default;
  virtual std::optional<UpdateOp> next(std::uint64_t t, double last_estimate) = 0;
  virtual bool done() const = 0;
};

// Fixed op list; ignores estimates entirely.
class ReplaySource : public OpSource {
 public:
  explicit ReplaySource(std::vector<UpdateOp> ops) : ops_(std::move(ops)) {}

  std::optional<UpdateOp> next(std::uint64_t, double) override {
    if (pos_ >= ops_.size()) return std::nullopt;
    return ops_[pos_++];
  }
  bool done() const override { return pos_ >= ops_.size(); }

 private:
  std::vector<UpdateOp> ops_;
  std::size_t pos_ = 0;
};

// The two estimate-feedback attacks. Each round plays one fresh key, never
// reused:
//
//   Reinsertion     Insert(x); if the estimate rose, Insert(x) once more,
//                   then never touch x again.
//   SampleAndDelete Insert(x); if the estimate rose, Delete(x) as the very
//                   next op, else leave x active.
//
// `rounds` counts fresh keys; conditional follow-up ops are extra steps.
class AttackAdversary : public OpSource {
 public:
  enum class Kind { kReinsertion, kSampleAndDelete };

  struct Options {
    Kind kind = Kind::kReinsertion;
    std::uint64_t rounds = 0;
    double detect_tol = 0.0;
    Key first_key = 1;
  };

  explicit AttackAdversary(const Options& opt);

  std::optional<UpdateOp> next(std::uint64_t t, double last_estimate) override;
  bool done() const override;

  std::uint64_t fresh_keys_used() const { return used_; }
  std::uint64_t detections() const { return detections_; }

 private:
  Options opt_;
  Key next_key_;
  std::uint64_t used_ = 0;
  std::uint64_t detections_ = 0;
  double base_estimate_ = 0.0;        // estimate before the pending insert
  std::optional<Key> check_key_;      // awaiting the reply for this key
};

// Duel summary derived from a harness trace.
struct DuelOutcome {
  double final_estimate = 0.0;
  double final_truth = 0.0;
  double truth_trace_max = 0.0;
  double bias = 0.0;  // final_estimate - final_truth
};

}  // namespace sketchlab
