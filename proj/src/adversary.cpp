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

#include "sketchlab/adversary.hpp"

#include <limits>

#include "sketchlab/errors.hpp"

namespace sketchlab {

bool detect_change(double prev, double cur, double tol) {
  if (!(tol >= 0.0)) throw ValidationError("detect_change: tol must be >= 0");
  return cur - prev > tol;
}

double default_detect_tol(double p) {
  const double jump = 1.0 / (2.0 * p);
  return jump - jump * std::numeric_limits<double>::epsilon() * 8.0;
}

AttackAdversary::AttackAdversary(const Options& opt)
    : opt_(opt), next_key_(opt.first_key) {
  if (!(opt.detect_tol >= 0.0)) {
    throw ValidationError("attack detect_tol must be >= 0");
  }
}

std::optional<UpdateOp> AttackAdversary::next(std::uint64_t,
                                              double last_estimate) {
  if (check_key_) {
    const Key x = *check_key_;
    check_key_.reset();
    if (detect_change(base_estimate_, last_estimate, opt_.detect_tol)) {
      ++detections_;
      return opt_.kind == Kind::kReinsertion ? UpdateOp::insert(x)
                                             : UpdateOp::delete_key(x);
    }
    // fall through: x is left alone, move on to a fresh key
  }
  if (used_ >= opt_.rounds) return std::nullopt;
  ++used_;
  const Key x = next_key_++;
  base_estimate_ = last_estimate;
  check_key_ = x;
  return UpdateOp::insert(x);
}

bool AttackAdversary::done() const {
  return used_ >= opt_.rounds && !check_key_;
}

}  // namespace sketchlab
