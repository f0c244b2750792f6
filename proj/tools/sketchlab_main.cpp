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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

using sketchlab::ExperimentConfig;
using sketchlab::TrialResult;

void write_outputs(const ExperimentConfig& cfg,
                   const std::vector<TrialResult>& results) {
  namespace fs = std::filesystem;
  if (cfg.out_dir.empty()) return;
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream cf(fs::path(cfg.out_dir) / "config.txt");
    cf << cfg.to_text();
  }
  std::ofstream summary(fs::path(cfg.out_dir) / "summary.csv");
  summary << "trial,max_norm_err,final_bias,final_estimate,final_truth,"
             "truth_trace_max,max_sample_size,halvings,tree_counters_peak,"
             "error\n";
  summary.precision(12);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const TrialResult& r = results[i];
    char name[64];
    std::snprintf(name, sizeof name, "trial_%04zu.csv", i);
    if (r.error.empty()) {
      sketchlab::write_csv(r.trace, (fs::path(cfg.out_dir) / name).string());
    }
    summary << i << ',' << r.metrics.max_norm_err << ','
            << r.metrics.final_bias << ',' << r.outcome.final_estimate << ','
            << r.outcome.final_truth << ',' << r.outcome.truth_trace_max << ','
            << r.metrics.max_sample_size << ',' << r.metrics.halvings << ','
            << r.metrics.tree_counters_peak << ',' << r.error << '\n';
  }
}

void print_summary(const std::vector<TrialResult>& results) {
  int failures = 0;
  double mean_final_est = 0.0;
  double mean_final_truth = 0.0;
  double worst_norm = 0.0;
  int ok = 0;
  for (const TrialResult& r : results) {
    if (!r.error.empty()) {
      ++failures;
      continue;
    }
    ++ok;
    mean_final_est += r.outcome.final_estimate;
    mean_final_truth += r.outcome.final_truth;
    worst_norm = std::max(worst_norm, r.metrics.max_norm_err);
  }
  if (ok > 0) {
    mean_final_est /= ok;
    mean_final_truth /= ok;
  }
  std::printf("trials=%zu ok=%d failed=%d\n", results.size(), ok, failures);
  std::printf("mean final estimate = %.6g, mean final truth = %.6g\n",
              mean_final_est, mean_final_truth);
  std::printf("worst max_t normalized error = %.6g\n", worst_norm);
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].error.empty()) {
      std::printf("trial %zu error: %s\n", i, results[i].error.c_str());
    }
  }
}

int run_command(const ExperimentConfig& cfg) {
  const std::vector<TrialResult> results = sketchlab::run_experiment(cfg);
  write_outputs(cfg, results);
  print_summary(results);
  bool all_failed = !results.empty();
  for (const TrialResult& r : results) {
    if (r.error.empty()) all_failed = false;
  }
  return all_failed ? kExitRuntime : kExitOk;
}

// Preset duels for the two estimate-feedback attacks against the plain
// fixed-rate estimator, reporting the resulting bias.
int attack_demo(std::uint64_t seed, int trials, const std::string& out_dir) {
  std::printf("%-14s %-6s %-8s %-14s %-14s %-12s\n", "attack", "p", "rounds",
              "mean N_hat_T", "mean N_T", "mean bias");
  struct Preset {
    sketchlab::AttackSelector attack;
    double p;
    std::uint64_t rounds;
  };
  const std::vector<Preset> presets = {
      {sketchlab::AttackSelector::kReinsert, 0.1, 10000},
      {sketchlab::AttackSelector::kSampleDelete, 0.2, 10000},
  };
  for (const Preset& ps : presets) {
    ExperimentConfig cfg;
    cfg.sketch = sketchlab::SketchSelector::kCardBernoulli;
    cfg.attack = ps.attack;
    cfg.p = ps.p;
    cfg.T = ps.rounds;
    cfg.trials = trials;
    cfg.seed = seed;
    if (!out_dir.empty()) {
      cfg.out_dir = out_dir + "/" + sketchlab::to_string(ps.attack);
    }
    const auto results = sketchlab::run_experiment(cfg);
    double est = 0.0, truth = 0.0;
    for (const TrialResult& r : results) {
      est += r.outcome.final_estimate;
      truth += r.outcome.final_truth;
    }
    est /= results.size();
    truth /= results.size();
    std::printf("%-14s %-6g %-8llu %-14.6g %-14.6g %-12.6g\n",
                sketchlab::to_string(ps.attack).c_str(), ps.p,
                static_cast<unsigned long long>(ps.rounds), est, truth,
                est - truth);
    if (!out_dir.empty()) write_outputs(cfg, results);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sketchlab: adaptively robust resettable streaming sketches"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string sketch_str = "card-bernoulli";
  std::string attack_str = "none";
  std::string fn_str = "softcap:10";
  std::string gen_str;
  std::string noise_str = "live";

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--sketch", sketch_str,
                  "card-bernoulli|card-robust-fixed|card-robust-adaptive|"
                  "sum-basic|sum-robust|sum-prefixmax|bernstein");
  run->add_option("--eps", cfg.eps, "accuracy parameter");
  run->add_option("--delta", cfg.delta, "confidence parameter");
  run->add_option("-T,--steps", cfg.T, "step/round budget");
  run->add_option("--attack", attack_str,
                  "none|reinsert|sample-delete|replay:<path>");
  run->add_option("--stream", cfg.stream_file, "stream file to replay");
  run->add_option("--gen", gen_str,
                  "distinct:N | cycles:KEYS:CYCLES | weighted:N:MIN:MAX");
  run->add_option("--seed", cfg.seed, "base RNG seed")
      ->envname("SKETCH_SEED");
  run->add_option("--trials", cfg.trials, "independent trials");
  run->add_option("--noise", noise_str, "live|zero");
  run->add_option("--out", cfg.out_dir, "output directory for CSV traces");
  run->add_option("--p", cfg.p, "fixed sampling probability");
  run->add_option("--p0", cfg.p0, "initial rate of the adjustable sketch");
  run->add_option("--tau", cfg.tau, "sum sampling threshold");
  run->add_option("--scale-max", cfg.scale_max,
                  "prefix-max sum scale ceiling (0 = auto)");
  run->add_option("--k-const", cfg.k_const, "sample-budget formula multiplier");
  run->add_option("--alpha-const", cfg.alpha_const,
                  "trigger-margin formula multiplier");
  run->add_option("--tau-const", cfg.tau_const,
                  "sum threshold-ladder multiplier");
  run->add_option("--f", fn_str, "moment:P | log1p | softcap:C");
  run->add_option("--r", cfg.r, "output keys per input key");
  run->add_option("--dmin", cfg.delta_min, "minimum Inc value");
  run->add_option("--dmax", cfg.delta_max, "maximum Inc value");
  run->add_flag("--dump-tree-noise", cfg.dump_tree_noise,
                "dump tree noise ledger CSV (diagnostic)");

  std::uint64_t demo_seed = 1;
  int demo_trials = 100;
  std::string demo_out;
  CLI::App* demo = app.add_subcommand(
      "attack-demo", "reproduce the fixed-rate estimator attack table");
  demo->add_option("--seed", demo_seed, "base RNG seed")->envname("SKETCH_SEED");
  demo->add_option("--trials", demo_trials, "trials per attack");
  demo->add_option("--out", demo_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (demo->parsed()) {
      return attack_demo(demo_seed, demo_trials, demo_out);
    }
    cfg.sketch = sketchlab::parse_sketch_selector(sketch_str);
    cfg.f = sketchlab::parse_bernstein_fn(fn_str);
    if (!gen_str.empty()) cfg.gen = sketchlab::parse_generator_spec(gen_str);
    if (noise_str == "zero") {
      cfg.noise = sketchlab::NoiseMode::kZero;
    } else if (noise_str == "live") {
      cfg.noise = sketchlab::NoiseMode::kLive;
    } else {
      throw sketchlab::ValidationError("--noise must be live or zero");
    }
    if (attack_str.rfind("replay:", 0) == 0) {
      cfg.attack = sketchlab::AttackSelector::kReplay;
      cfg.replay_path = attack_str.substr(7);
    } else {
      cfg.attack = sketchlab::parse_attack_selector(attack_str);
    }
    return run_command(cfg);
  } catch (const sketchlab::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sketchlab::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
