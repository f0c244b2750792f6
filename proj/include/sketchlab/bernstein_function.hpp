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

#include <string>
#include <variant>

namespace sketchlab {

// Built-in soft concave sublinear functions f(w) = ∫ a(t)(1 - e^{-wt}) dt.
//
//   Moment(p):  f(w) = w^p for p in (0,1),   a(t) = p/Γ(1-p) · t^{-(1+p)}
//   Log1p:      f(w) = ln(1+w),               a(t) = e^{-t}/t
//   SoftCap(C): f(w) = C(1 - e^{-w/C}),       a(t) = C·δ(t - 1/C)

struct MomentFn {
  double p = 0.5;
  friend bool operator==(const MomentFn&, const MomentFn&) = default;
};

struct Log1pFn {
  friend bool operator==(const Log1pFn&, const Log1pFn&) = default;
};

struct SoftCapFn {
  double cap = 1.0;
  friend bool operator==(const SoftCapFn&, const SoftCapFn&) = default;
};

using BernsteinFunctionId = std::variant<MomentFn, Log1pFn, SoftCapFn>;

// Closed forms for a built-in function: the value f(w), the tail of the
// inverse transform V(t) = ∫_t^∞ a(x) dx, and the head weight
// ∫_0^τ a(t)·t dt used as the Sum coefficient in the level reduction.
class BernsteinFunction {
 public:
  explicit BernsteinFunction(BernsteinFunctionId id);

  double value(double w) const;        // f(w)
  double tail(double t) const;         // V(t)
  double head_weight(double tau) const;

  // SoftCap's V is a step; the level construction special-cases it.
  bool step_tail() const;
  double step_location() const;  // 1/cap for SoftCap

  const BernsteinFunctionId& id() const { return id_; }
  std::string name() const;

 private:
  BernsteinFunctionId id_;
};

}  // namespace sketchlab
