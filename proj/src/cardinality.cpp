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

#include "sketchlab/cardinality.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sketchlab/errors.hpp"

namespace sketchlab {

namespace {

// Routes one resettable op onto a key sample: inserts (and positive incs)
// refresh the key's membership, deletes/resets drop it.
template <typename Refresh, typename Remove>
void route_card_op(const UpdateOp& op, Refresh refresh, Remove remove) {
  std::visit(
      [&](const auto& o) {
        using T = std::decay_t<decltype(o)>;
        if constexpr (std::is_same_v<T, InsertOp>) {
          refresh(o.key);
        } else if constexpr (std::is_same_v<T, IncOp>) {
          if (o.delta > 0.0) refresh(o.key);
        } else if constexpr (std::is_same_v<T, DeleteOp>) {
          remove(o.key);
        } else if constexpr (std::is_same_v<T, ResetKeyOp>) {
          remove(o.key);
        } else {
          // handled by callers that support predicate resets
        }
      },
      op.payload());
}

std::vector<Key> matching_keys(const std::unordered_set<Key>& sample,
                               const PredicateId& pred) {
  std::vector<Key> hit;
  for (Key k : sample) {
    if (pred_matches(pred, k)) hit.push_back(k);
  }
  return hit;
}

}  // namespace

BernoulliCardSketch::BernoulliCardSketch(double p, RngSeed seed)
    : p_(p), rng_(seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("sampling probability must be in (0,1]");
  }
}

CardEstimate BernoulliCardSketch::process(const UpdateOp& op) {
  if (const auto* rp = op.get_if<ResetPredOp>()) {
    for (Key k : matching_keys(sample_, rp->pred)) sample_.erase(k);
  } else {
    route_card_op(
        op,
        [&](Key k) {
          sample_.erase(k);
          if (rng_.bernoulli(p_)) sample_.insert(k);
        },
        [&](Key k) { sample_.erase(k); });
  }
  ++t_;
  max_sample_ = std::max(max_sample_, sample_.size());
  return CardEstimate{estimate(), t_};
}

RobustFixedCard::RobustFixedCard(const Options& opt, RngSeed seed)
    : inner_(opt.p, RngSeed{derive_seed(seed.value, 0)}),
      tree_(opt.tree_capacity, /*unit_l1=*/2.0, opt.eps_dp, opt.mode,
            RngSeed{derive_seed(seed.value, 1)}) {}

CardEstimate RobustFixedCard::process(const UpdateOp& op) {
  const CardEstimate raw = inner_.process(op);
  const double s = static_cast<double>(inner_.sample_size());
  const double u = s - prev_size_;
  prev_size_ = s;
  const NoisyPrefix noisy = tree_.update_and_report(u);
  return CardEstimate{noisy.value / inner_.rate(), raw.t};
}

CardParams card_params(double eps, double delta, std::uint64_t T,
                       double k_const, double alpha_const) {
  if (!(eps > 0.0 && eps <= 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw ValidationError("card_params: need eps in (0,1] and delta in (0,1)");
  }
  if (T < 2) throw ValidationError("card_params: need T >= 2");
  if (!(k_const > 0.0) || !(alpha_const > 0.0)) {
    throw ValidationError("card_params: constants must be positive");
  }
  const double logs = std::pow(std::log2(static_cast<double>(T)), 1.5) *
                      std::log(static_cast<double>(T) / delta);
  CardParams out;
  out.eps_dp = eps;
  out.k_formula = k_const * logs / (eps * eps);
  out.k = out.k_formula;
  out.alpha = alpha_const * logs / out.eps_dp;
  if (out.k < 4.0 * out.alpha) {
    out.k = 4.0 * out.alpha;
    out.rescaled = true;
  }
  return out;
}

std::uint64_t RobustAdaptiveCard::recommended_tree_capacity(
    std::uint64_t total_ops) {
  const double lg = std::log2(static_cast<double>(std::max<std::uint64_t>(total_ops, 2)));
  return total_ops + 2 * static_cast<std::uint64_t>(std::ceil(lg));
}

RobustAdaptiveCard::RobustAdaptiveCard(const Options& opt, RngSeed seed)
    : opt_(opt),
      p_(opt.p0),
      rng_(RngSeed{derive_seed(seed.value, 0)}),
      tree_(opt.tree_capacity, /*unit_l1=*/2.0, opt.eps_dp, opt.mode,
            RngSeed{derive_seed(seed.value, 1)}) {
  if (!(opt.p0 > 0.0 && opt.p0 <= 1.0)) {
    throw ValidationError("p0 must be in (0,1]");
  }
  if (!(opt.k > 0.0) || !(opt.alpha > 0.0) || opt.k <= opt.alpha) {
    throw ValidationError("need 0 < alpha < k");
  }
}

void RobustAdaptiveCard::update_sample(const UpdateOp& op) {
  if (const auto* rp = op.get_if<ResetPredOp>()) {
    for (Key k : matching_keys(sample_, rp->pred)) sample_.erase(k);
  } else {
    route_card_op(
        op,
        [&](Key k) {
          sample_.erase(k);
          if (rng_.bernoulli(p_)) sample_.insert(k);
        },
        [&](Key k) { sample_.erase(k); });
  }
}

CardEstimate RobustAdaptiveCard::process(const UpdateOp& op) {
  update_sample(op);
  ++t_;
  max_sample_ = std::max(max_sample_, sample_.size());

  double s = static_cast<double>(sample_.size());
  NoisyPrefix noisy = tree_.update_and_report(s - s_prev_);
  s_prev_ = s;

  int rounds = 0;
  while (noisy.value > opt_.k - opt_.alpha) {
    if (rounds >= opt_.max_adjustments_per_step) {
      cap_hit_ = true;
      break;
    }
    ++rounds;
    p_ /= 2.0;
    ++halvings_;
    // Thin in canonical key order so the draw sequence is replayable.
    std::vector<Key> keys(sample_.begin(), sample_.end());
    std::sort(keys.begin(), keys.end());
    sample_.clear();
    for (Key k : keys) {
      if (rng_.bernoulli(0.5)) sample_.insert(k);
    }
    const double s_new = static_cast<double>(sample_.size());
    noisy = tree_.update_and_report(s_new - s_prev_);
    s_prev_ = s_new;
  }
  last_released_ = noisy.value;
  return CardEstimate{noisy.value / p_, t_};
}

}  // namespace sketchlab
