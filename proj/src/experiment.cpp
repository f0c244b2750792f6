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

#include "sketchlab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "sketchlab/bernstein_sketch.hpp"
#include "sketchlab/cardinality.hpp"
#include "sketchlab/errors.hpp"
#include "sketchlab/exact_tracker.hpp"
#include "sketchlab/stream_text.hpp"
#include "sketchlab/sum_sketch.hpp"

namespace sketchlab {

namespace {

struct Diagnostics {
  std::size_t max_sample_size = 0;
  int halvings = 0;
  std::size_t tree_counters_peak = 0;
};

// Type erasure over the concrete sketches so the trial loop is uniform.
class SketchRunner {
 public:
  virtual ~SketchRunner() = default;
  virtual double process(const UpdateOp& op) = 0;
  virtual Diagnostics diagnostics() const = 0;
  // Single-tree sketches expose their mechanism for the noise-ledger dump.
  virtual const TreeMechanism* tree_mechanism() const { return nullptr; }
  virtual void record_tree_noise(bool) {}
};

class BernoulliRunner : public SketchRunner {
 public:
  BernoulliRunner(double p, RngSeed seed) : sk_(p, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.max_sample_size(), 0, 0};
  }

 private:
  BernoulliCardSketch sk_;
};

class RobustFixedRunner : public SketchRunner {
 public:
  RobustFixedRunner(const RobustFixedCard::Options& opt, RngSeed seed)
      : sk_(opt, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.inner().max_sample_size(), 0, sk_.tree().max_live_counters()};
  }
  const TreeMechanism* tree_mechanism() const override { return &sk_.tree(); }
  void record_tree_noise(bool on) override { sk_.record_tree_noise(on); }

 private:
  RobustFixedCard sk_;
};

class RobustAdaptiveRunner : public SketchRunner {
 public:
  RobustAdaptiveRunner(const RobustAdaptiveCard::Options& opt, RngSeed seed)
      : sk_(opt, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.max_sample_size(), sk_.halvings(),
            sk_.tree().max_live_counters()};
  }
  const TreeMechanism* tree_mechanism() const override { return &sk_.tree(); }
  void record_tree_noise(bool on) override { sk_.record_tree_noise(on); }

 private:
  RobustAdaptiveCard sk_;
};

class SumBasicRunner : public SketchRunner {
 public:
  SumBasicRunner(double tau, RngSeed seed) : sk_(tau, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.max_sample_size(), 0, 0};
  }

 private:
  ResettableSumSketch sk_;
};

class SumRobustRunner : public SketchRunner {
 public:
  SumRobustRunner(const RobustSumFixed::Options& opt, RngSeed seed)
      : sk_(opt, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.inner().max_sample_size(), 0, sk_.tree().max_live_counters()};
  }
  const TreeMechanism* tree_mechanism() const override { return &sk_.tree(); }
  void record_tree_noise(bool on) override { sk_.record_tree_noise(on); }

 private:
  RobustSumFixed sk_;
};

class SumPrefixMaxRunner : public SketchRunner {
 public:
  SumPrefixMaxRunner(const PrefixMaxSum::Options& opt, RngSeed seed)
      : sk_(opt, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op).value; }
  Diagnostics diagnostics() const override {
    return {sk_.live_sample_size(), 0, 0};
  }

 private:
  PrefixMaxSum sk_;
};

class BernsteinRunner : public SketchRunner {
 public:
  BernsteinRunner(const BernsteinSketch::Options& opt, RngSeed seed)
      : sk_(opt, seed) {}
  double process(const UpdateOp& op) override { return sk_.process(op); }
  Diagnostics diagnostics() const override { return {}; }

 private:
  BernsteinSketch sk_;
};

class GeneratorSource : public OpSource {
 public:
  GeneratorSource(const GeneratorSpec& spec, RngSeed seed)
      : replay_(generate_stream(spec, seed)) {}
  std::optional<UpdateOp> next(std::uint64_t t, double e) override {
    return replay_.next(t, e);
  }
  bool done() const override { return replay_.done(); }

 private:
  ReplaySource replay_;
};

double rate_for_detection(const ExperimentConfig& cfg) {
  switch (cfg.sketch) {
    case SketchSelector::kCardBernoulli:
    case SketchSelector::kCardRobustFixed:
      return cfg.p;
    case SketchSelector::kCardRobustAdaptive:
      return cfg.p0;
    default:
      return 1.0;
  }
}

// Worst-case op count a source can feed: attacks may add one follow-up per
// round; adaptive sketches add O(log) adjustment reports on top.
std::uint64_t expected_ops(const ExperimentConfig& cfg,
                           const std::vector<UpdateOp>* replay_ops) {
  if (cfg.attack == AttackSelector::kReinsert ||
      cfg.attack == AttackSelector::kSampleDelete) {
    return 2 * cfg.T;
  }
  if (replay_ops && !replay_ops->empty()) return replay_ops->size();
  if (cfg.gen) return std::max(cfg.T, generator_length(*cfg.gen));
  return cfg.T;
}

}  // namespace

std::string to_string(SketchSelector s) {
  switch (s) {
    case SketchSelector::kCardBernoulli: return "card-bernoulli";
    case SketchSelector::kCardRobustFixed: return "card-robust-fixed";
    case SketchSelector::kCardRobustAdaptive: return "card-robust-adaptive";
    case SketchSelector::kSumBasic: return "sum-basic";
    case SketchSelector::kSumRobust: return "sum-robust";
    case SketchSelector::kSumPrefixMax: return "sum-prefixmax";
    case SketchSelector::kBernstein: return "bernstein";
  }
  return "?";
}

std::string to_string(AttackSelector a) {
  switch (a) {
    case AttackSelector::kNone: return "none";
    case AttackSelector::kReinsert: return "reinsert";
    case AttackSelector::kSampleDelete: return "sample-delete";
    case AttackSelector::kReplay: return "replay";
  }
  return "?";
}

SketchSelector parse_sketch_selector(const std::string& s) {
  for (SketchSelector v :
       {SketchSelector::kCardBernoulli, SketchSelector::kCardRobustFixed,
        SketchSelector::kCardRobustAdaptive, SketchSelector::kSumBasic,
        SketchSelector::kSumRobust, SketchSelector::kSumPrefixMax,
        SketchSelector::kBernstein}) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError("unknown sketch selector: " + s);
}

AttackSelector parse_attack_selector(const std::string& s) {
  for (AttackSelector v :
       {AttackSelector::kNone, AttackSelector::kReinsert,
        AttackSelector::kSampleDelete, AttackSelector::kReplay}) {
    if (to_string(v) == s) return v;
  }
  throw ValidationError("unknown attack selector: " + s);
}

BernsteinFunctionId parse_bernstein_fn(const std::string& s) {
  if (s == "log1p") return Log1pFn{};
  if (s.rfind("moment:", 0) == 0) {
    return MomentFn{std::stod(s.substr(7))};
  }
  if (s.rfind("softcap:", 0) == 0) {
    return SoftCapFn{std::stod(s.substr(8))};
  }
  throw ValidationError("unknown function spec: " + s +
                        " (want moment:P | log1p | softcap:C)");
}

std::string to_string(const BernsteinFunctionId& f) {
  char buf[64];
  if (const auto* m = std::get_if<MomentFn>(&f)) {
    std::snprintf(buf, sizeof buf, "moment:%.17g", m->p);
    return buf;
  }
  if (const auto* c = std::get_if<SoftCapFn>(&f)) {
    std::snprintf(buf, sizeof buf, "softcap:%.17g", c->cap);
    return buf;
  }
  return "log1p";
}

GeneratorSpec parse_generator_spec(const std::string& s) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  try {
    if (parts[0] == "distinct" && parts.size() == 2) {
      return DistinctInserts{std::stoull(parts[1])};
    }
    if (parts[0] == "cycles" && parts.size() == 3) {
      return InsertDeleteCycles{std::stoull(parts[1]), std::stoull(parts[2])};
    }
    if (parts[0] == "weighted" && parts.size() == 4) {
      return WeightedIncs{std::stoull(parts[1]), std::stod(parts[2]),
                          std::stod(parts[3])};
    }
  } catch (const std::exception&) {
  }
  throw ValidationError(
      "unknown generator spec: " + s +
      " (want distinct:N | cycles:KEYS:CYCLES | weighted:N:MIN:MAX)");
}

std::string to_string(const GeneratorSpec& g) {
  char buf[128];
  if (const auto* d = std::get_if<DistinctInserts>(&g)) {
    std::snprintf(buf, sizeof buf, "distinct:%llu",
                  static_cast<unsigned long long>(d->count));
  } else if (const auto* c = std::get_if<InsertDeleteCycles>(&g)) {
    std::snprintf(buf, sizeof buf, "cycles:%llu:%llu",
                  static_cast<unsigned long long>(c->keys),
                  static_cast<unsigned long long>(c->cycles));
  } else {
    const auto& w = std::get<WeightedIncs>(g);
    std::snprintf(buf, sizeof buf, "weighted:%llu:%.17g:%.17g",
                  static_cast<unsigned long long>(w.count), w.delta_min,
                  w.delta_max);
  }
  return buf;
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "sketch " << sketchlab::to_string(sketch) << "\n";
  os << "eps " << eps << "\n";
  os << "delta " << delta << "\n";
  os << "T " << T << "\n";
  os << "p " << p << "\n";
  os << "p0 " << p0 << "\n";
  os << "tau " << tau << "\n";
  os << "scale_max " << scale_max << "\n";
  os << "k_const " << k_const << "\n";
  os << "alpha_const " << alpha_const << "\n";
  os << "tau_const " << tau_const << "\n";
  os << "f " << sketchlab::to_string(f) << "\n";
  os << "r " << r << "\n";
  os << "delta_min " << delta_min << "\n";
  os << "delta_max " << delta_max << "\n";
  os << "attack " << sketchlab::to_string(attack) << "\n";
  if (!replay_path.empty()) os << "replay_path " << replay_path << "\n";
  if (gen) os << "gen " << sketchlab::to_string(*gen) << "\n";
  if (!stream_file.empty()) os << "stream_file " << stream_file << "\n";
  os << "seed " << seed << "\n";
  os << "trials " << trials << "\n";
  os << "noise " << (noise == NoiseMode::kZero ? "zero" : "live") << "\n";
  if (!out_dir.empty()) os << "out_dir " << out_dir << "\n";
  os << "dump_tree_noise " << (dump_tree_noise ? 1 : 0) << "\n";
  return os.str();
}

ExperimentConfig ExperimentConfig::from_text(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) throw ParseError("missing value", lineno);
    const std::string key = line.substr(0, sp);
    const std::string val = line.substr(sp + 1);
    try {
      if (key == "sketch") cfg.sketch = parse_sketch_selector(val);
      else if (key == "eps") cfg.eps = std::stod(val);
      else if (key == "delta") cfg.delta = std::stod(val);
      else if (key == "T") cfg.T = std::stoull(val);
      else if (key == "p") cfg.p = std::stod(val);
      else if (key == "p0") cfg.p0 = std::stod(val);
      else if (key == "tau") cfg.tau = std::stod(val);
      else if (key == "scale_max") cfg.scale_max = std::stod(val);
      else if (key == "k_const") cfg.k_const = std::stod(val);
      else if (key == "alpha_const") cfg.alpha_const = std::stod(val);
      else if (key == "tau_const") cfg.tau_const = std::stod(val);
      else if (key == "f") cfg.f = parse_bernstein_fn(val);
      else if (key == "r") cfg.r = std::stoi(val);
      else if (key == "delta_min") cfg.delta_min = std::stod(val);
      else if (key == "delta_max") cfg.delta_max = std::stod(val);
      else if (key == "attack") cfg.attack = parse_attack_selector(val);
      else if (key == "replay_path") cfg.replay_path = val;
      else if (key == "gen") cfg.gen = parse_generator_spec(val);
      else if (key == "stream_file") cfg.stream_file = val;
      else if (key == "seed") cfg.seed = std::stoull(val);
      else if (key == "trials") cfg.trials = std::stoi(val);
      else if (key == "noise") cfg.noise = val == "zero" ? NoiseMode::kZero : NoiseMode::kLive;
      else if (key == "out_dir") cfg.out_dir = val;
      else if (key == "dump_tree_noise") cfg.dump_tree_noise = val != "0";
      else throw ParseError("unknown config key '" + key + "'", lineno);
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad value for ") + key + ": " + e.what(),
                       lineno);
    }
  }
  return cfg;
}

DuelOutcome duel_outcome_from_trace(const std::vector<TraceRecord>& trace) {
  DuelOutcome out;
  if (trace.empty()) return out;
  out.final_estimate = trace.back().estimate;
  out.final_truth = trace.back().truth;
  out.truth_trace_max = trace.back().prefix_max;
  out.bias = out.final_estimate - out.final_truth;
  return out;
}

namespace {

std::unique_ptr<OpSource> build_source(const ExperimentConfig& cfg,
                                       RngSeed trial_seed,
                                       std::vector<UpdateOp> replay_ops) {
  switch (cfg.attack) {
    case AttackSelector::kReinsert:
    case AttackSelector::kSampleDelete: {
      AttackAdversary::Options ao;
      ao.kind = cfg.attack == AttackSelector::kReinsert
                    ? AttackAdversary::Kind::kReinsertion
                    : AttackAdversary::Kind::kSampleAndDelete;
      ao.rounds = cfg.T;
      ao.detect_tol = default_detect_tol(rate_for_detection(cfg));
      return std::make_unique<AttackAdversary>(ao);
    }
    case AttackSelector::kReplay:
      return std::make_unique<ReplaySource>(std::move(replay_ops));
    case AttackSelector::kNone:
      break;
  }
  if (cfg.gen) {
    return std::make_unique<GeneratorSource>(
        *cfg.gen, RngSeed{derive_seed(trial_seed.value, 2)});
  }
  return std::make_unique<ReplaySource>(std::move(replay_ops));
}

std::unique_ptr<SketchRunner> build_runner(const ExperimentConfig& cfg,
                                           std::uint64_t ops, RngSeed seed) {
  const std::uint64_t pad = 8;
  switch (cfg.sketch) {
    case SketchSelector::kCardBernoulli:
      return std::make_unique<BernoulliRunner>(cfg.p, seed);
    case SketchSelector::kCardRobustFixed: {
      RobustFixedCard::Options o;
      o.p = cfg.p;
      o.eps_dp = cfg.eps;
      o.mode = cfg.noise;
      o.tree_capacity = ops + pad;
      return std::make_unique<RobustFixedRunner>(o, seed);
    }
    case SketchSelector::kCardRobustAdaptive: {
      const CardParams params =
          card_params(cfg.eps, cfg.delta, std::max<std::uint64_t>(ops, 2),
                      cfg.k_const, cfg.alpha_const);
      RobustAdaptiveCard::Options o;
      o.p0 = cfg.p0;
      o.k = params.k;
      o.alpha = params.alpha;
      o.eps_dp = params.eps_dp;
      o.mode = cfg.noise;
      o.tree_capacity = RobustAdaptiveCard::recommended_tree_capacity(ops);
      return std::make_unique<RobustAdaptiveRunner>(o, seed);
    }
    case SketchSelector::kSumBasic:
      return std::make_unique<SumBasicRunner>(cfg.tau, seed);
    case SketchSelector::kSumRobust: {
      RobustSumFixed::Options o;
      o.tau = cfg.tau;
      o.clip = RobustSumFixed::clip_for(cfg.tau, std::max<std::uint64_t>(ops, 1), cfg.delta);
      o.eps_dp = cfg.eps;
      o.mode = cfg.noise;
      o.tree_capacity = ops + pad;
      return std::make_unique<SumRobustRunner>(o, seed);
    }
    case SketchSelector::kSumPrefixMax: {
      PrefixMaxSum::Options o;
      o.eps = cfg.eps;
      o.delta = cfg.delta;
      o.T = std::max<std::uint64_t>(ops, 2);
      o.scale_max = cfg.scale_max > 0.0
                        ? cfg.scale_max
                        : static_cast<double>(ops) * std::max(1.0, cfg.delta_max);
      o.tau_const = cfg.tau_const;
      o.mode = cfg.noise;
      o.tree_capacity = ops + pad;
      return std::make_unique<SumPrefixMaxRunner>(o, seed);
    }
    case SketchSelector::kBernstein: {
      BernsteinSketch::Options o;
      o.f = cfg.f;
      o.eps = cfg.eps;
      o.delta = cfg.delta;
      o.T = std::max<std::uint64_t>(ops, 1);
      o.delta_min = cfg.delta_min;
      o.delta_max = cfg.delta_max;
      o.r = cfg.r;
      o.mode = cfg.noise;
      return std::make_unique<BernsteinRunner>(o, seed);
    }
  }
  throw ValidationError("unhandled sketch selector");
}

StatisticKind truth_statistic(const ExperimentConfig& cfg) {
  switch (cfg.sketch) {
    case SketchSelector::kCardBernoulli:
    case SketchSelector::kCardRobustFixed:
    case SketchSelector::kCardRobustAdaptive:
      return StatisticKind::cardinality();
    case SketchSelector::kSumBasic:
    case SketchSelector::kSumRobust:
    case SketchSelector::kSumPrefixMax:
      return StatisticKind::sum();
    case SketchSelector::kBernstein:
      return StatisticKind::bernstein(cfg.f);
  }
  return StatisticKind::cardinality();
}

}  // namespace

std::vector<TrialResult> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw ValidationError("trials must be >= 1");
  if (cfg.attack == AttackSelector::kNone && !cfg.gen &&
      cfg.stream_file.empty()) {
    throw ValidationError("no input selected: need --attack, --gen or --stream");
  }
  if (cfg.dump_tree_noise && !cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
  }

  const StatisticKind kind = truth_statistic(cfg);
  std::vector<TrialResult> results(cfg.trials);

  for (int trial = 0; trial < cfg.trials; ++trial) {
    TrialResult& res = results[trial];
    const RngSeed trial_seed{derive_seed(cfg.seed, static_cast<std::uint64_t>(trial))};
    try {
      // File problems are per-trial failures; the remaining trials still run.
      std::vector<UpdateOp> replay_ops;
      if (cfg.attack == AttackSelector::kReplay) {
        replay_ops = parse_stream_file(cfg.replay_path);
      } else if (cfg.attack == AttackSelector::kNone && !cfg.gen) {
        replay_ops = parse_stream_file(cfg.stream_file);
      }
      auto source = build_source(cfg, trial_seed, replay_ops);
      const std::uint64_t ops = expected_ops(cfg, replay_ops.empty() ? nullptr : &replay_ops);
      auto runner = build_runner(cfg, ops, RngSeed{derive_seed(trial_seed.value, 1)});
      if (cfg.dump_tree_noise) runner->record_tree_noise(true);
      ExactTracker tracker({kind});

      std::uint64_t t = 0;
      double last_raw = 0.0;
      while (!source->done()) {
        const auto op = source->next(t + 1, last_raw);
        if (!op) break;
        ++t;
        tracker.apply(*op);
        const double raw = runner->process(*op);
        last_raw = raw;
        const double est = std::max(0.0, raw);
        const double truth = tracker.exact_statistic(kind);
        const double prefix = tracker.prefix_max(kind);
        const double abs_err = std::abs(est - truth);
        TraceRecord rec;
        rec.t = t;
        rec.op = op->to_string();
        rec.estimate = est;
        rec.truth = truth;
        rec.prefix_max = prefix;
        rec.abs_err = abs_err;
        rec.norm_err = abs_err / std::max(prefix, 1.0);
        res.trace.push_back(std::move(rec));
        res.metrics.max_norm_err =
            std::max(res.metrics.max_norm_err, res.trace.back().norm_err);
      }
      const Diagnostics diag = runner->diagnostics();
      res.metrics.max_sample_size = diag.max_sample_size;
      res.metrics.halvings = diag.halvings;
      res.metrics.tree_counters_peak = diag.tree_counters_peak;
      if (!res.trace.empty()) {
        res.metrics.final_bias =
            res.trace.back().estimate - res.trace.back().truth;
      }
      res.outcome = duel_outcome_from_trace(res.trace);
      if (cfg.dump_tree_noise && !cfg.out_dir.empty()) {
        if (const TreeMechanism* tm = runner->tree_mechanism()) {
          char name[64];
          std::snprintf(name, sizeof name, "/tree_noise_%04d.csv", trial);
          std::ofstream nf(cfg.out_dir + name);
          nf << "node_level,node_start,noise\n";
          nf.precision(12);
          for (const auto& rec : tm->noise_records()) {
            nf << rec.level << ',' << rec.start << ',' << rec.noise << '\n';
          }
        }
      }
    } catch (const std::exception& e) {
      res.error = e.what();
    }
  }
  return results;
}

namespace {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  os << "t,op,estimate,truth,prefix_max,abs_err,norm_err\n";
  for (const TraceRecord& r : trace) {
    os << r.t << ',' << r.op << ',' << format_real(r.estimate) << ','
       << format_real(r.truth) << ',' << format_real(r.prefix_max) << ','
       << format_real(r.abs_err) << ',' << format_real(r.norm_err) << '\n';
  }
  return os.str();
}

void write_csv(const std::vector<TraceRecord>& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << trace_to_csv(trace);
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<TraceRecord> parse_trace_csv_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::uint64_t lineno = 0;
  std::vector<TraceRecord> out;
  while (std::getline(is, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "t,op,estimate,truth,prefix_max,abs_err,norm_err") {
        throw ParseError("bad trace header", lineno);
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    if (cells.size() != 7) throw ParseError("expected 7 columns", lineno);
    try {
      TraceRecord r;
      r.t = std::stoull(cells[0]);
      r.op = cells[1];
      r.estimate = std::stod(cells[2]);
      r.truth = std::stod(cells[3]);
      r.prefix_max = std::stod(cells[4]);
      r.abs_err = std::stod(cells[5]);
      r.norm_err = std::stod(cells[6]);
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError(std::string("bad cell: ") + e.what(), lineno);
    }
  }
  return out;
}

std::vector<TraceRecord> parse_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace_csv_text(buf.str());
}

}  // namespace sketchlab
