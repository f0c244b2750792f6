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

#include "sketchlab/tree_mechanism.hpp"

#include <algorithm>
#include <cmath>

#include "sketchlab/errors.hpp"

namespace sketchlab {

TreeMechanism::TreeMechanism(std::uint64_t capacity, double unit_l1,
                             double eps_dp, NoiseMode mode, RngSeed seed)
    : capacity_(capacity), mode_(mode), rng_(seed) {
  if (capacity < 1) throw ValidationError("tree capacity must be >= 1");
  if (!(unit_l1 > 0.0) || !std::isfinite(unit_l1)) {
    throw ValidationError("tree unit sensitivity must be positive");
  }
  if (!(eps_dp > 0.0) || !std::isfinite(eps_dp)) {
    throw ValidationError("tree eps_dp must be positive");
  }
  lambda_ = capacity == 1
                ? unit_l1 / eps_dp
                : unit_l1 * std::log2(static_cast<double>(capacity)) / eps_dp;
  frontier_.reserve(64);
}

double TreeMechanism::draw_noise() { return rng_.laplace(lambda_, mode_); }

NoisyPrefix TreeMechanism::update_and_report(double u) {
  if (t_ >= capacity_) {
    throw CapacityError("tree mechanism capacity exceeded");
  }
  ++t_;
  frontier_.push_back(Node{0, t_, u, draw_noise()});
  if (record_) {
    records_.push_back(NoiseRecord{0, t_, frontier_.back().noise});
  }
  max_live_ = std::max(max_live_, frontier_.size());
  // Fold completed sibling pairs upward; only the frontier survives.
  while (frontier_.size() >= 2 &&
         frontier_[frontier_.size() - 1].level ==
             frontier_[frontier_.size() - 2].level) {
    const Node right = frontier_.back();
    frontier_.pop_back();
    const Node left = frontier_.back();
    frontier_.pop_back();
    Node parent{left.level + 1, left.start, left.sum + right.sum, draw_noise()};
    if (record_) {
      records_.push_back(NoiseRecord{parent.level, parent.start, parent.noise});
    }
    frontier_.push_back(parent);
  }
  double report = 0.0;
  for (const Node& n : frontier_) report += n.sum + n.noise;
  last_report_ = report;
  return NoisyPrefix{report, t_};
}

}  // namespace sketchlab
