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

#include "sketchlab/exact_tracker.hpp"

#include <algorithm>
#include <cmath>

namespace sketchlab {

double StatisticKind::apply(double v) const {
  switch (kind) {
    case Kind::kCardinality:
      return v > 0.0 ? 1.0 : 0.0;
    case Kind::kSum:
      return v;
    case Kind::kBernstein:
      return BernsteinFunction(f).value(v);
  }
  return 0.0;
}

ExactTracker::ExactTracker()
    : ExactTracker({StatisticKind::cardinality(), StatisticKind::sum()}) {}

ExactTracker::ExactTracker(std::vector<StatisticKind> tracked)
    : tracked_(std::move(tracked)), prefix_max_(tracked_.size(), 0.0) {}

void ExactTracker::remove_key(Key key) {
  auto it = values_.find(key);
  if (it == values_.end()) return;
  sum_ -= it->second;
  values_.erase(it);
}

void ExactTracker::apply(const UpdateOp& op) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, IncOp>) {
          if (o.delta > 0.0) {
            auto it = values_.find(o.key);
            const double cur = it == values_.end() ? 0.0 : it->second;
            const double next = cur + o.delta;
            if (!std::isfinite(next)) {
              throw ValidationError("Inc overflows the stored value");
            }
            if (it == values_.end()) {
              values_.emplace(o.key, next);
            } else {
              it->second = next;
            }
            sum_ += o.delta;
          }
        } else if constexpr (std::is_same_v<T, ResetKeyOp>) {
          remove_key(o.key);
        } else if constexpr (std::is_same_v<T, ResetPredOp>) {
          for (auto it = values_.begin(); it != values_.end();) {
            if (pred_matches(o.pred, it->first)) {
              sum_ -= it->second;
              it = values_.erase(it);
            } else {
              ++it;
            }
          }
        } else if constexpr (std::is_same_v<T, InsertOp>) {
          remove_key(o.key);
          values_[o.key] = 1.0;
          sum_ += 1.0;
        } else {
          remove_key(o.key);
        }
      },
      op.payload());
  ++t_;
  for (std::size_t i = 0; i < tracked_.size(); ++i) {
    prefix_max_[i] = std::max(prefix_max_[i], exact_statistic(tracked_[i]));
  }
}

double ExactTracker::exact_statistic(const StatisticKind& s) const {
  switch (s.kind) {
    case StatisticKind::Kind::kCardinality:
      return static_cast<double>(values_.size());
    case StatisticKind::Kind::kSum:
      return sum_;
    case StatisticKind::Kind::kBernstein:
      return exact_bernstein_oracle(values_, BernsteinFunction(s.f));
  }
  return 0.0;
}

std::size_t ExactTracker::stat_index(const StatisticKind& s) const {
  for (std::size_t i = 0; i < tracked_.size(); ++i) {
    if (tracked_[i] == s) return i;
  }
  throw ValidationError("statistic not registered with this tracker");
}

double ExactTracker::prefix_max(const StatisticKind& s) const {
  return prefix_max_[stat_index(s)];
}

double exact_bernstein_oracle(const std::map<Key, double>& values,
                              const BernsteinFunction& f) {
  double total = 0.0;
  for (const auto& [key, v] : values) total += f.value(v);
  return total;
}

}  // namespace sketchlab
