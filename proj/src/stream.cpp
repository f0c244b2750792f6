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

#include "sketchlab/stream.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sketchlab {

bool pred_matches(const PredicateId& pred, Key key) {
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KeyRange>) {
          return p.lo <= key && key <= p.hi;
        } else {
          return std::find(p.keys.begin(), p.keys.end(), key) != p.keys.end();
        }
      },
      pred);
}

UpdateOp UpdateOp::inc(Key key, double delta) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw ValidationError("Inc delta must be finite and nonnegative");
  }
  return UpdateOp(IncOp{key, delta});
}

UpdateOp UpdateOp::reset_key(Key key) { return UpdateOp(ResetKeyOp{key}); }

UpdateOp UpdateOp::reset_pred(PredicateId pred) {
  return UpdateOp(ResetPredOp{std::move(pred)});
}

UpdateOp UpdateOp::insert(Key key) { return UpdateOp(InsertOp{key}); }

UpdateOp UpdateOp::delete_key(Key key) { return UpdateOp(DeleteOp{key}); }

std::string UpdateOp::to_string() const {
  std::ostringstream os;
  os.precision(12);
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, IncOp>) {
          os << "INC " << op.key << " " << op.delta;
        } else if constexpr (std::is_same_v<T, ResetKeyOp>) {
          os << "RST " << op.key;
        } else if constexpr (std::is_same_v<T, ResetPredOp>) {
          if (const auto* r = std::get_if<KeyRange>(&op.pred)) {
            os << "RSTR " << r->lo << " " << r->hi;
          } else {
            os << "RSTS";
            for (Key k : std::get<KeySet>(op.pred).keys) os << " " << k;
          }
        } else if constexpr (std::is_same_v<T, InsertOp>) {
          os << "INS " << op.key;
        } else {
          os << "DEL " << op.key;
        }
      },
      payload_);
  return os.str();
}

std::vector<UpdateOp> to_cardinality_stream(const UpdateOp& op) {
  if (const auto* ins = op.get_if<InsertOp>()) {
    return {UpdateOp::reset_key(ins->key), UpdateOp::inc(ins->key, 1.0)};
  }
  if (const auto* del = op.get_if<DeleteOp>()) {
    return {UpdateOp::reset_key(del->key)};
  }
  return {op};
}

std::vector<UpdateOp> generate_stream(const GeneratorSpec& spec, RngSeed seed) {
  std::vector<UpdateOp> out;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, DistinctInserts>) {
          out.reserve(g.count);
          for (std::uint64_t i = 1; i <= g.count; ++i) {
            out.push_back(UpdateOp::insert(i));
          }
        } else if constexpr (std::is_same_v<T, InsertDeleteCycles>) {
          out.reserve(2 * g.keys * g.cycles);
          for (std::uint64_t c = 0; c < g.cycles; ++c) {
            for (std::uint64_t i = 1; i <= g.keys; ++i) {
              out.push_back(UpdateOp::insert(i));
            }
            for (std::uint64_t i = 1; i <= g.keys; ++i) {
              out.push_back(UpdateOp::delete_key(i));
            }
          }
        } else {
          if (!(g.delta_min >= 0.0) || !(g.delta_max >= g.delta_min)) {
            throw ValidationError("weighted_incs: need 0 <= delta_min <= delta_max");
          }
          RandomSource rng(seed);
          out.reserve(g.count);
          for (std::uint64_t i = 1; i <= g.count; ++i) {
            const double d =
                g.delta_min + rng.uniform01() * (g.delta_max - g.delta_min);
            out.push_back(UpdateOp::inc(i, d));
          }
        }
      },
      spec);
  return out;
}

std::uint64_t generator_length(const GeneratorSpec& spec) {
  return std::visit(
      [](const auto& g) -> std::uint64_t {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, DistinctInserts>) {
          return g.count;
        } else if constexpr (std::is_same_v<T, InsertDeleteCycles>) {
          return 2 * g.keys * g.cycles;
        } else {
          return g.count;
        }
      },
      spec);
}

}  // namespace sketchlab
