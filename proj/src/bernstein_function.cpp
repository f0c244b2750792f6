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

#include "sketchlab/bernstein_function.hpp"

#include <cmath>

#include "sketchlab/errors.hpp"

namespace sketchlab {

BernsteinFunction::BernsteinFunction(BernsteinFunctionId id) : id_(id) {
  if (const auto* m = std::get_if<MomentFn>(&id_)) {
    if (!(m->p > 0.0 && m->p < 1.0)) {
      throw ValidationError("moment exponent must be in (0,1)");
    }
  } else if (const auto* c = std::get_if<SoftCapFn>(&id_)) {
    if (!(c->cap > 0.0) || !std::isfinite(c->cap)) {
      throw ValidationError("soft cap level must be positive and finite");
    }
  }
}

double BernsteinFunction::value(double w) const {
  if (w <= 0.0) return 0.0;
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, MomentFn>) {
          return std::pow(w, fn.p);
        } else if constexpr (std::is_same_v<T, Log1pFn>) {
          return std::log1p(w);
        } else {
          return fn.cap * -std::expm1(-w / fn.cap);
        }
      },
      id_);
}

double BernsteinFunction::tail(double t) const {
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, MomentFn>) {
          return std::pow(t, -fn.p) / std::tgamma(1.0 - fn.p);
        } else if constexpr (std::is_same_v<T, Log1pFn>) {
          // E1(t) = -Ei(-t) for t > 0.
          return -std::expint(-t);
        } else {
          return t <= 1.0 / fn.cap ? fn.cap : 0.0;
        }
      },
      id_);
}

double BernsteinFunction::head_weight(double tau) const {
  if (tau <= 0.0) return 0.0;
  return std::visit(
      [&](const auto& fn) -> double {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, MomentFn>) {
          return fn.p * std::pow(tau, 1.0 - fn.p) /
                 (std::tgamma(1.0 - fn.p) * (1.0 - fn.p));
        } else if constexpr (std::is_same_v<T, Log1pFn>) {
          return -std::expm1(-tau);
        } else {
          return tau >= 1.0 / fn.cap ? 1.0 : 0.0;
        }
      },
      id_);
}

bool BernsteinFunction::step_tail() const {
  return std::holds_alternative<SoftCapFn>(id_);
}

double BernsteinFunction::step_location() const {
  return 1.0 / std::get<SoftCapFn>(id_).cap;
}

std::string BernsteinFunction::name() const {
  return std::visit(
      [](const auto& fn) -> std::string {
        using T = std::decay_t<decltype(fn)>;
        if constexpr (std::is_same_v<T, MomentFn>) {
          return "moment:" + std::to_string(fn.p);
        } else if constexpr (std::is_same_v<T, Log1pFn>) {
          return "log1p";
        } else {
          return "softcap:" + std::to_string(fn.cap);
        }
      },
      id_);
}

}  // namespace sketchlab
