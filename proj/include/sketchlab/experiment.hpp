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
#include <optional>
#include <string>
#include <vector>

#include "sketchlab/adversary.hpp"
#include "sketchlab/bernstein_function.hpp"
#include "sketchlab/random_source.hpp"
#include "sketchlab/stream.hpp"

namespace sketchlab {

// One row per processed op. `estimate` is the released value clamped at 0
// for metric purposes; truth and prefix_max come from the exact tracker.
struct TraceRecord {
  std::uint64_t t = 0;
  std::string op;
  double estimate = 0.0;
  double truth = 0.0;
  double prefix_max = 0.0;
  double abs_err = 0.0;
  double norm_err = 0.0;  // abs_err / max(prefix_max, 1)

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct Metrics {
  double max_norm_err = 0.0;
  double final_bias = 0.0;
  std::size_t max_sample_size = 0;
  int halvings = 0;
  std::size_t tree_counters_peak = 0;
};

enum class SketchSelector {
  kCardBernoulli,
  kCardRobustFixed,
  kCardRobustAdaptive,
  kSumBasic,
  kSumRobust,
  kSumPrefixMax,
  kBernstein,
};

enum class AttackSelector { kNone, kReinsert, kSampleDelete, kReplay };

std::string to_string(SketchSelector s);
std::string to_string(AttackSelector a);
SketchSelector parse_sketch_selector(const std::string& s);
AttackSelector parse_attack_selector(const std::string& s);

// "moment:0.5" | "log1p" | "softcap:10"
BernsteinFunctionId parse_bernstein_fn(const std::string& s);
std::string to_string(const BernsteinFunctionId& f);

// "distinct:N" | "cycles:KEYS:CYCLES" | "weighted:N:MIN:MAX"
GeneratorSpec parse_generator_spec(const std::string& s);
std::string to_string(const GeneratorSpec& g);

struct ExperimentConfig {
  SketchSelector sketch = SketchSelector::kCardBernoulli;
  double eps = 0.3;
  double delta = 0.05;
  std::uint64_t T = 1000;       // step/round budget (see input selectors)
  double p = 0.1;               // fixed sampling rate
  double p0 = 1.0;              // initial rate of the adjustable sketch
  double tau = 1.0;             // sum threshold
  double scale_max = 0.0;       // 0 = auto (T * delta_max)
  double k_const = 1.0;         // multipliers on the parameter formulas
  double alpha_const = 1.0;
  double tau_const = 1.0;
  BernsteinFunctionId f = SoftCapFn{10.0};
  int r = 64;
  double delta_min = 1.0;
  double delta_max = 1.0;
  AttackSelector attack = AttackSelector::kNone;
  std::string replay_path;
  std::optional<GeneratorSpec> gen;
  std::string stream_file;
  std::uint64_t seed = 1;
  int trials = 1;
  NoiseMode noise = NoiseMode::kLive;
  std::string out_dir;
  bool dump_tree_noise = false;

  // Round-trip text serialization ("key value" lines).
  std::string to_text() const;
  static ExperimentConfig from_text(const std::string& text);

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

struct TrialResult {
  std::vector<TraceRecord> trace;
  Metrics metrics;
  DuelOutcome outcome;
  std::string error;  // empty on success; trial aborted at the failing op
};

// Runs cfg.trials independent trials with child seeds derived from
// (cfg.seed, trial index). Per-trial errors are recorded, not thrown.
std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg);

DuelOutcome duel_outcome_from_trace(const std::vector<TraceRecord>& trace);

// Trace CSV: header `t,op,estimate,truth,prefix_max,abs_err,norm_err`,
// reals with 12 significant digits.
void write_csv(const std::vector<TraceRecord>& trace, const std::string& path);
std::string trace_to_csv(const std::vector<TraceRecord>& trace);
std::vector<TraceRecord> parse_trace_csv_text(const std::string& text);
std::vector<TraceRecord> parse_trace_csv(const std::string& path);

}  // namespace sketchlab
