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
#include <string>
#include <variant>
#include <vector>

#include "sketchlab/errors.hpp"
#include "sketchlab/random_source.hpp"

namespace sketchlab {

// Opaque 64-bit key identifier.
using Key = std::uint64_t;

// Predicates for batch resets. Membership is pure and deterministic.
struct KeyRange {
  Key lo = 0;
  Key hi = 0;  // inclusive
  friend bool operator==(const KeyRange&, const KeyRange&) = default;
};

struct KeySet {
  std::vector<Key> keys;
  friend bool operator==(const KeySet&, const KeySet&) = default;
};

using PredicateId = std::variant<KeyRange, KeySet>;

bool pred_matches(const PredicateId& pred, Key key);

// One resettable-stream event.
//
//   Inc(x, Δ)    Δ >= 0, adds Δ to v_x
//   ResetKey(x)  v_x <- 0
//   ResetPred(P) v_x <- 0 for all x matching P
//   Insert(x)    sugar for ResetKey(x); Inc(x, 1)
//   Delete(x)    sugar for ResetKey(x)
struct IncOp {
  Key key = 0;
  double delta = 0.0;
  friend bool operator==(const IncOp&, const IncOp&) = default;
};
struct ResetKeyOp {
  Key key = 0;
  friend bool operator==(const ResetKeyOp&, const ResetKeyOp&) = default;
};
struct ResetPredOp {
  PredicateId pred;
  friend bool operator==(const ResetPredOp&, const ResetPredOp&) = default;
};
struct InsertOp {
  Key key = 0;
  friend bool operator==(const InsertOp&, const InsertOp&) = default;
};
struct DeleteOp {
  Key key = 0;
  friend bool operator==(const DeleteOp&, const DeleteOp&) = default;
};

// Ops are only constructible through the factories, which reject malformed
// payloads (negative or non-finite Inc deltas).
class UpdateOp {
 public:
  using Payload = std::variant<IncOp, ResetKeyOp, ResetPredOp, InsertOp, DeleteOp>;

  static UpdateOp inc(Key key, double delta);
  static UpdateOp reset_key(Key key);
  static UpdateOp reset_pred(PredicateId pred);
  static UpdateOp insert(Key key);
  static UpdateOp delete_key(Key key);

  const Payload& payload() const { return payload_; }

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&payload_);
  }

  std::string to_string() const;

  friend bool operator==(const UpdateOp&, const UpdateOp&) = default;

 private:
  explicit UpdateOp(Payload p) : payload_(std::move(p)) {}
  Payload payload_;
};

// Rewrites one op through the Insert/Delete-to-resettable reduction:
// Insert(x) -> [ResetKey(x), Inc(x,1)], Delete(x) -> [ResetKey(x)],
// anything else passes through unchanged.
std::vector<UpdateOp> to_cardinality_stream(const UpdateOp& op);

// Deterministic stream generators.
struct DistinctInserts {
  std::uint64_t count = 0;
  friend bool operator==(const DistinctInserts&, const DistinctInserts&) = default;
};
struct InsertDeleteCycles {
  std::uint64_t keys = 0;
  std::uint64_t cycles = 0;
  friend bool operator==(const InsertDeleteCycles&, const InsertDeleteCycles&) = default;
};
struct WeightedIncs {
  std::uint64_t count = 0;
  double delta_min = 0.0;
  double delta_max = 0.0;
  friend bool operator==(const WeightedIncs&, const WeightedIncs&) = default;
};
using GeneratorSpec = std::variant<DistinctInserts, InsertDeleteCycles, WeightedIncs>;

std::vector<UpdateOp> generate_stream(const GeneratorSpec& spec, RngSeed seed);

// Stream length is a function of the generator parameters alone.
std::uint64_t generator_length(const GeneratorSpec& spec);

}  // namespace sketchlab
