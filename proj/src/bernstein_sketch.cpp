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

#include "sketchlab/bernstein_sketch.hpp"

#include <algorithm>
#include <cmath>

#include "sketchlab/errors.hpp"

namespace sketchlab {

namespace {
constexpr double kBracketLo = 1e-18;
constexpr double kBracketHi = 1e18;
constexpr int kMaxLevels = 100000;
}  // namespace

double invert_tail(const BernsteinFunction& f, double target) {
  if (!(target > 0.0)) throw ValidationError("invert_tail: target must be > 0");
  if (f.tail(kBracketHi) >= target) return kBracketHi;
  if (f.tail(kBracketLo) < target) {
    throw ValidationError("invert_tail: target above V over the bracket");
  }
  double lo = std::log(kBracketLo);
  double hi = std::log(kBracketHi);
  // V(e^lo) >= target > V(e^hi); bisect to ~1e-12 relative in t.
  for (int i = 0; i < 200 && (hi - lo) > 1e-13; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f.tail(std::exp(mid)) >= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(lo);
}

LevelPlan plan_levels(const BernsteinFunction& f, double eps, std::uint64_t T,
                      double delta_min, double delta_max, int r) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw ValidationError("plan_levels: need eps in (0,1)");
  }
  if (T < 1) throw ValidationError("plan_levels: need T >= 1");
  if (!(delta_min > 0.0 && delta_min <= delta_max)) {
    throw ValidationError("plan_levels: need 0 < delta_min <= delta_max");
  }
  if (r < 1 || r > 256) throw ValidationError("plan_levels: need r in [1,256]");

  LevelPlan plan;
  plan.r = r;
  plan.tau = std::sqrt(eps) / (static_cast<double>(T) * delta_max);
  plan.v_floor = (eps / static_cast<double>(T)) * f.value(delta_min);

  if (f.step_tail()) {
    // Atom at 1/cap: a single level carries the whole tail mass.
    plan.head_weight = f.head_weight(plan.tau);
    if (plan.tau < f.step_location()) {
      plan.levels.push_back(f.step_location());
      plan.weights.push_back(f.tail(plan.tau));
    }
    return plan;
  }

  plan.head_weight = f.head_weight(plan.tau);
  const double v0 = f.tail(plan.tau);
  if (!(v0 > 0.0) || !std::isfinite(v0)) {
    throw ValidationError("plan_levels: tail not positive at the cutoff");
  }
  double prev_v = v0;
  double prev_level = plan.tau;
  for (int i = 1; i <= kMaxLevels; ++i) {
    const double v_i = v0 / std::pow(1.0 + eps, i);
    const double tau_i = invert_tail(f, v_i);
    if (tau_i < prev_level) {
      throw ValidationError("plan_levels: tail function is not monotone");
    }
    plan.levels.push_back(tau_i);
    plan.weights.push_back(prev_v - v_i);
    prev_v = v_i;
    prev_level = tau_i;
    if (v_i <= plan.v_floor) return plan;
  }
  throw ValidationError("plan_levels: level ladder failed to terminate");
}

Key BernsteinSketch::output_key(Key key, int k) {
  if (key >= (Key{1} << 56)) {
    throw ValidationError("input key must fit in 56 bits");
  }
  if (k < 1 || k > 256) throw ValidationError("need k in [1,256]");
  return (key << 8) | static_cast<Key>(k - 1);
}

BernsteinElementMap::BernsteinElementMap(LevelPlan plan, double delta_min,
                                         double delta_max, RngSeed seed)
    : plan_(std::move(plan)),
      delta_min_(delta_min),
      delta_max_(delta_max),
      rng_(seed) {}

std::vector<std::vector<UpdateOp>> BernsteinElementMap::map(const UpdateOp& op) {
  const int m = plan_.m();
  std::vector<std::vector<UpdateOp>> emitted(m);

  if (const auto* inc = op.get_if<IncOp>()) {
    if (inc->delta < delta_min_ || inc->delta > delta_max_) {
      throw ValidationError("Inc delta outside [delta_min, delta_max]");
    }
    for (int k = 1; k <= plan_.r; ++k) {
      const Key z = BernsteinSketch::output_key(inc->key, k);
      for (int i = 0; i < m; ++i) {
        const double y = rng_.exponential(inc->delta);
        if (y < plan_.levels[i]) {
          emitted[i].push_back(UpdateOp::insert(z));
        }
      }
    }
  } else if (const auto* rst = op.get_if<ResetKeyOp>()) {
    for (int i = 0; i < m; ++i) {
      emitted[i].reserve(plan_.r);
      for (int k = 1; k <= plan_.r; ++k) {
        emitted[i].push_back(
            UpdateOp::delete_key(BernsteinSketch::output_key(rst->key, k)));
      }
    }
  } else {
    throw ValidationError("bernstein map accepts Inc and ResetKey only");
  }
  return emitted;
}

BernsteinSketch::BernsteinSketch(const Options& opt, RngSeed seed)
    : opt_(opt),
      f_(opt.f),
      map_(plan_levels(f_, opt.eps, opt.T, opt.delta_min, opt.delta_max, opt.r),
           opt.delta_min, opt.delta_max, RngSeed{derive_seed(seed.value, 0)}) {
  const int m = map_.plan().m();
  const double eps_sub = opt.eps / (m + 1);
  const double delta_sub = opt.delta / (m + 1);

  // Sum side: scale ceiling T * delta_max, horizon = input ops (resets at
  // most double the Inc count).
  PrefixMaxSum::Options so;
  so.eps = eps_sub;
  so.delta = delta_sub;
  so.T = std::max<std::uint64_t>(opt.T, 2);
  so.scale_max = std::max(1.0, static_cast<double>(opt.T) * opt.delta_max);
  so.tree_capacity = 2 * so.T + 64;
  so.mode = opt.mode;
  sum_ = std::make_unique<PrefixMaxSum>(so, RngSeed{derive_seed(seed.value, 1)});

  // One cardinality sketch per level; stream E_i sees at most T*r ops of
  // either sign, so its tree is sized for the mapped horizon.
  const std::uint64_t mapped_ops =
      2 * std::max<std::uint64_t>(opt.T, 2) * static_cast<std::uint64_t>(opt.r);
  const CardParams cp =
      card_params(eps_sub, delta_sub, std::max<std::uint64_t>(mapped_ops, 2));
  for (int i = 1; i <= m; ++i) {
    RobustAdaptiveCard::Options co;
    co.p0 = 1.0;
    co.k = cp.k;
    co.alpha = cp.alpha;
    co.eps_dp = cp.eps_dp;
    co.tree_capacity = RobustAdaptiveCard::recommended_tree_capacity(mapped_ops);
    co.mode = opt.mode;
    cards_.push_back(std::make_unique<RobustAdaptiveCard>(
        co, RngSeed{derive_seed(seed.value, 100 + i)}));
  }
  card_last_.assign(m, 0.0);
}

std::vector<std::vector<UpdateOp>> BernsteinSketch::map_update(
    const UpdateOp& op) {
  std::vector<std::vector<UpdateOp>> emitted = map_.map(op);
  sum_->process(op);
  for (std::size_t i = 0; i < emitted.size(); ++i) {
    for (const UpdateOp& e : emitted[i]) {
      card_last_[i] = cards_[i]->process(e).value;
    }
  }
  ++ops_;
  return emitted;
}

double BernsteinSketch::process(const UpdateOp& op) {
  map_update(op);
  return estimate();
}

double BernsteinSketch::estimate() const {
  if (ops_ == 0) return 0.0;
  const LevelPlan& plan = map_.plan();
  double value = plan.head_weight * sum_->estimate();
  for (int i = 0; i < plan.m(); ++i) {
    value += plan.weights[i] * card_last_[i] / plan.r;
  }
  if (value < (1.0 - opt_.eps) * f_.value(opt_.delta_min)) return 0.0;
  return value;
}

}  // namespace sketchlab
