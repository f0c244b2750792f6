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
#include <vector>

#include "sketchlab/random_source.hpp"

namespace sketchlab {

struct NoisyPrefix {
  double value = 0.0;   // S̃_t
  std::uint64_t t = 0;  // step index of the report
};

// Streaming binary tree mechanism for noisy prefix sums under continual
// release.
//
// Updates u_1, u_2, ... are grouped into dyadic intervals; each interval node
// carries an independent Laplace(lambda) noise, drawn once when the node is
// created and reused for every report that touches it. The prefix [1..t] is
// covered by the frontier nodes (the 1-bits of t); closed siblings fold into
// their parent, so at most ceil(log2(capacity)) + 1 counters are ever live.
//
// lambda = unit_l1 * log2(capacity) / eps_dp, calibrated for units whose total
// l1 contribution across all their updates is at most unit_l1. A capacity of
// 1 degenerates to one node with lambda = unit_l1 / eps_dp.
class TreeMechanism {
 public:
  struct Node {
    int level = 0;            // 0 = leaf
    std::uint64_t start = 0;  // first step covered (1-based)
    double sum = 0.0;
    double noise = 0.0;
  };
  struct NoiseRecord {
    int level = 0;
    std::uint64_t start = 0;
    double noise = 0.0;
  };

  TreeMechanism(std::uint64_t capacity, double unit_l1, double eps_dp,
                NoiseMode mode, RngSeed seed);

  // Consumes u_t and returns the noisy prefix sum through step t.
  // Throws CapacityError once `capacity` updates have been consumed.
  NoisyPrefix update_and_report(double u);

  double last_report() const { return last_report_; }
  std::uint64_t steps() const { return t_; }
  std::uint64_t capacity() const { return capacity_; }
  double lambda() const { return lambda_; }
  NoiseMode mode() const { return mode_; }

  std::size_t live_counters() const { return frontier_.size(); }
  std::size_t max_live_counters() const { return max_live_; }

  // Frontier = the dyadic cover of [1..t], in decreasing level order.
  const std::vector<Node>& frontier() const { return frontier_; }

  // Test/diagnostic hook: record (level, start, noise) of every node created.
  void set_noise_recording(bool on) { record_ = on; }
  const std::vector<NoiseRecord>& noise_records() const { return records_; }

 private:
  double draw_noise();

  std::uint64_t capacity_;
  double lambda_;
  NoiseMode mode_;
  RandomSource rng_;
  std::uint64_t t_ = 0;
  double last_report_ = 0.0;
  std::vector<Node> frontier_;
  std::size_t max_live_ = 0;
  bool record_ = false;
  std::vector<NoiseRecord> records_;
};

}  // namespace sketchlab
