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
#include <vector>

#include "sketchlab/bernstein_function.hpp"
#include "sketchlab/stream.hpp"

namespace sketchlab {

// Which Σ_x f(v_x) statistic to evaluate: f = 1{v>0}, f = v, or a Bernstein
// function.
struct StatisticKind {
  enum class Kind { kCardinality, kSum, kBernstein };

  static StatisticKind cardinality() { return {Kind::kCardinality, {}}; }
  static StatisticKind sum() { return {Kind::kSum, {}}; }
  static StatisticKind bernstein(BernsteinFunctionId f) {
    return {Kind::kBernstein, f};
  }

  double apply(double v) const;

  Kind kind = Kind::kCardinality;
  BernsteinFunctionId f;  // meaningful only for kBernstein

  friend bool operator==(const StatisticKind&, const StatisticKind&) = default;
};

// Ground-truth oracle: the full key -> value map, with the current statistic
// value and its running prefix-max for every registered statistic. Keys whose
// value drops to zero are removed, so cardinality is exactly the map size.
//
// Cardinality and Sum are maintained incrementally (O(1) per touched key);
// Bernstein statistics are recomputed over the map on demand, so registering
// one makes apply() linear in the number of active keys.
class ExactTracker {
 public:
  ExactTracker();  // tracks cardinality and sum
  explicit ExactTracker(std::vector<StatisticKind> tracked);

  // Applies one op and advances the step counter; prefix maxima of all
  // registered statistics are refreshed. Increments that would overflow the
  // stored value are rejected.
  void apply(const UpdateOp& op);

  double exact_statistic(const StatisticKind& s) const;

  // Running max over steps 1..t of the statistic; 0 before any op.
  double prefix_max(const StatisticKind& s) const;

  std::uint64_t step() const { return t_; }
  const std::map<Key, double>& values() const { return values_; }

 private:
  void remove_key(Key key);
  std::size_t stat_index(const StatisticKind& s) const;

  std::map<Key, double> values_;
  std::uint64_t t_ = 0;
  double sum_ = 0.0;
  std::vector<StatisticKind> tracked_;
  std::vector<double> prefix_max_;
};

// Σ_x f(v_x) by direct evaluation over an explicit dataset.
double exact_bernstein_oracle(const std::map<Key, double>& values,
                              const BernsteinFunction& f);

}  // namespace sketchlab
