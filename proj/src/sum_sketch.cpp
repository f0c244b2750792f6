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

#include "sketchlab/sum_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sketchlab/errors.hpp"

namespace sketchlab {

ResettableSumSketch::ResettableSumSketch(double tau, RngSeed seed)
    : tau_(tau), rng_(seed) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ValidationError("sampling threshold tau must be positive");
  }
}

double ResettableSumSketch::draw_entry() {
  if (forced_entry_) {
    const double r = *forced_entry_;
    forced_entry_.reset();
    return r;
  }
  return rng_.exponential(1.0 / tau_);
}

void ResettableSumSketch::inc(Key key, double delta) {
  if (delta <= 0.0) return;
  auto it = counters_.find(key);
  if (it != counters_.end()) {
    it->second += delta;
    estimate_ += delta;
    return;
  }
  const double r = draw_entry();
  if (r < delta) {
    counters_.emplace(key, delta - r);
    estimate_ += tau_ + (delta - r);
  }
}

void ResettableSumSketch::remove(Key key) {
  auto it = counters_.find(key);
  if (it == counters_.end()) return;
  estimate_ -= tau_ + it->second;
  counters_.erase(it);
}

SumEstimate ResettableSumSketch::process(const UpdateOp& op) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, IncOp>) {
          inc(o.key, o.delta);
        } else if constexpr (std::is_same_v<T, ResetKeyOp>) {
          remove(o.key);
        } else if constexpr (std::is_same_v<T, DeleteOp>) {
          remove(o.key);
        } else if constexpr (std::is_same_v<T, InsertOp>) {
          remove(o.key);
          inc(o.key, 1.0);
        } else {
          std::vector<Key> hit;
          for (const auto& [k, c] : counters_) {
            if (pred_matches(o.pred, k)) hit.push_back(k);
          }
          for (Key k : hit) remove(k);
        }
      },
      op.payload());
  ++t_;
  max_sample_ = std::max(max_sample_, counters_.size());
  return SumEstimate{estimate_, t_};
}

EntryThresholdSumSketch::EntryThresholdSumSketch(double tau, RngSeed seed)
    : tau_(tau), rng_(seed) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw ValidationError("sampling threshold tau must be positive");
  }
}

double EntryThresholdSumSketch::draw_threshold() {
  if (!cap_) return rng_.exponential(1.0 / tau_);
  // Inverse CDF of Exp(mean tau) conditioned on <= cap.
  const double u = rng_.uniform01();
  return -tau_ * std::log1p(u * std::expm1(-*cap_ / tau_));
}

void EntryThresholdSumSketch::inc(Key key, double delta) {
  if (delta <= 0.0) return;
  auto it = state_.find(key);
  if (it == state_.end()) {
    state_.emplace(key, Epoch{delta, draw_threshold()});
  } else {
    it->second.value += delta;
  }
}

SumEstimate EntryThresholdSumSketch::process(const UpdateOp& op) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, IncOp>) {
          inc(o.key, o.delta);
        } else if constexpr (std::is_same_v<T, ResetKeyOp>) {
          state_.erase(o.key);
        } else if constexpr (std::is_same_v<T, DeleteOp>) {
          state_.erase(o.key);
        } else if constexpr (std::is_same_v<T, InsertOp>) {
          state_.erase(o.key);
          inc(o.key, 1.0);
        } else {
          for (auto it = state_.begin(); it != state_.end();) {
            if (pred_matches(o.pred, it->first)) {
              it = state_.erase(it);
            } else {
              ++it;
            }
          }
        }
      },
      op.payload());
  ++t_;
  return SumEstimate{estimate(), t_};
}

double EntryThresholdSumSketch::estimate() const {
  double total = 0.0;
  for (const auto& [key, e] : state_) {
    if (e.value > e.threshold) total += e.value + tau_ - e.threshold;
  }
  return total;
}

bool EntryThresholdSumSketch::sampled(Key key) const {
  auto it = state_.find(key);
  return it != state_.end() && it->second.value > it->second.threshold;
}

double EntryThresholdSumSketch::threshold_of(Key key) const {
  auto it = state_.find(key);
  if (it == state_.end()) return std::numeric_limits<double>::quiet_NaN();
  return it->second.threshold;
}

double RobustSumFixed::clip_for(double tau, std::uint64_t T, double delta) {
  if (T < 1 || !(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("clip_for: need T >= 1 and delta in (0,1)");
  }
  return tau * std::log(static_cast<double>(T) / delta);
}

RobustSumFixed::RobustSumFixed(const Options& opt, RngSeed seed)
    : inner_(opt.tau, RngSeed{derive_seed(seed.value, 0)}),
      tree_(opt.tree_capacity, /*unit_l1=*/2.0, opt.eps_dp, opt.mode,
            RngSeed{derive_seed(seed.value, 1)}),
      clip_(opt.clip) {
  if (!(clip_ > 0.0) || !std::isfinite(clip_)) {
    throw ValidationError("clip level must be positive");
  }
}

std::pair<double, double> RobustSumFixed::split_of(Key key) const {
  auto it = inner_.sample().find(key);
  if (it == inner_.sample().end()) return {0.0, 0.0};
  const double y = inner_.tau() + it->second;
  return {std::min(clip_, y), std::max(0.0, y - clip_)};
}

void RobustSumFixed::ledger_add(Key key, double mass) {
  if (!ledger_on_ || mass == 0.0) return;
  unit_mass_[{key, epoch_[key]}] += mass;
}

void RobustSumFixed::ledger_close_epoch(Key key) {
  if (!ledger_on_) return;
  ++epoch_[key];
}

double RobustSumFixed::max_unit_mass() const {
  double m = 0.0;
  for (const auto& [unit, mass] : unit_mass_) m = std::max(m, mass);
  return m;
}

SumEstimate RobustSumFixed::process(const UpdateOp& op) {
  double dprot = 0.0;
  double dexc = 0.0;

  const auto single_key_change = [&](Key key, auto apply_inner, bool closes,
                                     bool opens) {
    const auto [p0, e0] = split_of(key);
    if (closes) {
      ledger_add(key, p0 / clip_);
      ledger_close_epoch(key);
    }
    apply_inner();
    const auto [p1, e1] = split_of(key);
    if (closes && opens) {
      ledger_add(key, p1 / clip_);
    } else if (!closes) {
      ledger_add(key, std::abs(p1 - p0) / clip_);
    }
    dprot += p1 - p0;
    dexc += e1 - e0;
  };

  SumEstimate raw{};
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, IncOp>) {
          single_key_change(o.key, [&] { raw = inner_.process(op); },
                            /*closes=*/false, /*opens=*/false);
        } else if constexpr (std::is_same_v<T, ResetKeyOp> ||
                             std::is_same_v<T, DeleteOp>) {
          single_key_change(o.key, [&] { raw = inner_.process(op); },
                            /*closes=*/true, /*opens=*/false);
        } else if constexpr (std::is_same_v<T, InsertOp>) {
          single_key_change(o.key, [&] { raw = inner_.process(op); },
                            /*closes=*/true, /*opens=*/true);
        } else {
          std::vector<Key> hit;
          for (const auto& [k, c] : inner_.sample()) {
            if (pred_matches(o.pred, k)) hit.push_back(k);
          }
          std::sort(hit.begin(), hit.end());
          for (Key k : hit) {
            const auto [p0, e0] = split_of(k);
            ledger_add(k, p0 / clip_);
            ledger_close_epoch(k);
            dprot -= p0;
            dexc -= e0;
          }
          raw = inner_.process(op);
        }
      },
      op.payload());

  p_hat_ += dprot;
  d_hat_ += dexc;
  const NoisyPrefix noisy = tree_.update_and_report(dprot / clip_);
  return SumEstimate{clip_ * noisy.value + d_hat_, raw.t};
}

SumParams sum_params(double eps, double delta, std::uint64_t T,
                     double scale_max, double tau_const) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("sum_params: need eps in (0,1] and delta in (0,1)");
  }
  if (T < 2) throw ValidationError("sum_params: need T >= 2");
  if (!(scale_max >= 1.0)) throw ValidationError("sum_params: scale_max >= 1");
  if (!(tau_const > 0.0)) throw ValidationError("sum_params: tau_const > 0");
  const int levels = std::max(
      1, static_cast<int>(std::ceil(std::log2(scale_max))));
  const double denom = std::pow(std::log2(static_cast<double>(T)), 3.5) *
                       std::pow(std::log(1.0 / delta), 2.0);
  SumParams out;
  out.eps_dp = eps;
  for (int k = 1; k <= levels; ++k) {
    const double tau_k =
        tau_const * eps * eps * std::ldexp(1.0, k) / denom;
    out.tau.push_back(tau_k);
    out.clip.push_back(RobustSumFixed::clip_for(tau_k, T, delta));
  }
  return out;
}

PrefixMaxSum::PrefixMaxSum(const Options& opt, RngSeed seed)
    : params_(sum_params(opt.eps, opt.delta, opt.T, opt.scale_max,
                         opt.tau_const)) {
  slots_.resize(params_.tau.size());
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    RobustSumFixed::Options ro;
    ro.tau = params_.tau[i];
    ro.clip = params_.clip[i];
    ro.tree_capacity = opt.tree_capacity;
    ro.eps_dp = params_.eps_dp;
    ro.mode = opt.mode;
    slots_[i].sketch = std::make_unique<RobustSumFixed>(
        ro, RngSeed{derive_seed(seed.value, i + 1)});
  }
}

SumEstimate PrefixMaxSum::process(const UpdateOp& op) {
  ++t_;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    Slot& slot = slots_[i];
    if (!slot.sketch) continue;
    slot.last = slot.sketch->process(op).value;
    const double threshold = std::ldexp(1.0, static_cast<int>(i) + 1);  // 2^k
    if (!slot.activated && slot.last >= threshold) slot.activated = true;
  }
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].activated) active_ = std::max(active_, static_cast<int>(i) + 1);
  }
  for (int k = 1; k < active_; ++k) slots_[k - 1].sketch.reset();
  estimate_ = active_ > 0 ? slots_[active_ - 1].last : 0.0;
  return SumEstimate{estimate_, t_};
}

std::size_t PrefixMaxSum::live_sample_size() const {
  std::size_t n = 0;
  for (const auto& slot : slots_) {
    if (slot.sketch) n += slot.sketch->inner().sample_size();
  }
  return n;
}

}  // namespace sketchlab
