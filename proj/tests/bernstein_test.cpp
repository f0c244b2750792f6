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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "sketchlab/bernstein_sketch.hpp"
#include "sketchlab/exact_tracker.hpp"
#include "test_common.hpp"

using namespace sketchlab;

namespace {

// Inverse transform density a(t) of the built-ins with a continuous tail.
double density(const BernsteinFunctionId& id, double t) {
  if (const auto* m = std::get_if<MomentFn>(&id)) {
    return m->p / std::tgamma(1.0 - m->p) * std::pow(t, -(1.0 + m->p));
  }
  return std::exp(-t) / t;  // Log1p
}

// ∫ a(t) g(t) dt over (0, ∞) on the log axis; integrands decay
// exponentially in u = ln t at both ends for the built-ins.
double transform_integral(const BernsteinFunctionId& id,
                          const std::function<double(double)>& g) {
  // The window is sized so the truncated mass sits below 1e-12 relative even
  // for the slowest-decaying built-in (moment exponents near 1).
  return testutil::trapezoid(
      [&](double u) {
        const double t = std::exp(u);
        return density(id, t) * g(t) * t;
      },
      -150.0, 120.0, 12000);
}

// Exact per-level inclusion probabilities give the expected estimator value
// of the tail part: Σ_i alpha_i Σ_x (1 - e^{-w_x tau_i}).
double expected_tail_estimate(const LevelPlan& plan,
                              const std::map<Key, double>& values) {
  double total = 0.0;
  for (int i = 0; i < plan.m(); ++i) {
    double lc = 0.0;
    for (const auto& [k, w] : values) lc += -std::expm1(-w * plan.levels[i]);
    total += plan.weights[i] * lc;
  }
  return total;
}

}  // namespace

TEST_CASE("closed-form values") {
  const BernsteinFunction half(MomentFn{0.5});
  CHECK(half.value(1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(half.value(4.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(half.value(0.0) == 0.0);

  CHECK(exact_bernstein_oracle({{1, 1.0}}, half) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(exact_bernstein_oracle({{1, 4.0}, {2, 9.0}}, half) ==
        doctest::Approx(5.0).epsilon(1e-12));

  const BernsteinFunction cap(SoftCapFn{7.0});
  CHECK(exact_bernstein_oracle({{1, 3.0}}, cap) ==
        doctest::Approx(7.0 * (1.0 - std::exp(-3.0 / 7.0))).epsilon(1e-12));
}

TEST_CASE("value matches the transform integral to 1e-9 relative") {
  for (const BernsteinFunctionId id :
       {BernsteinFunctionId{MomentFn{0.3}}, BernsteinFunctionId{MomentFn{0.5}},
        BernsteinFunctionId{MomentFn{0.8}}, BernsteinFunctionId{Log1pFn{}}}) {
    const BernsteinFunction f(id);
    for (double w : {0.1, 1.0, 4.0, 37.5}) {
      const double direct = f.value(w);
      const double via_integral = transform_integral(
          id, [&](double t) { return -std::expm1(-w * t); });
      CHECK(via_integral == doctest::Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("tail and head weight match the transform integrals") {
  // Integrate on the log axis over the exact subranges so the integrands
  // stay smooth.
  for (const BernsteinFunctionId id :
       {BernsteinFunctionId{MomentFn{0.4}}, BernsteinFunctionId{Log1pFn{}}}) {
    const BernsteinFunction f(id);
    for (double t0 : {0.05, 0.7, 3.0}) {
      const double tail_direct = f.tail(t0);
      const double tail_integral = testutil::simpson(
          [&](double u) {
            const double t = std::exp(u);
            return density(id, t) * t;
          },
          std::log(t0), 100.0, 40000);
      CHECK(tail_integral == doctest::Approx(tail_direct).epsilon(1e-8));

      const double head_direct = f.head_weight(t0);
      const double head_integral = testutil::simpson(
          [&](double u) {
            const double t = std::exp(u);
            return density(id, t) * t * t;
          },
          -80.0, std::log(t0), 40000);
      CHECK(head_integral == doctest::Approx(head_direct).epsilon(1e-8));
    }
  }
}

TEST_CASE("soft cap plans a single level carrying the atom") {
  const BernsteinFunction f(SoftCapFn{1.0});
  const LevelPlan plan = plan_levels(f, 0.5, 10, 1.0, 1.0, 4);
  CHECK(plan.m() == 1);
  CHECK(plan.levels[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plan.weights[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plan.head_weight == 0.0);
  CHECK(plan.tau == doctest::Approx(std::sqrt(0.5) / 10.0).epsilon(1e-12));
}

TEST_CASE("moment level count stays under the geometric-ladder bound") {
  const double eps = 0.25;
  const BernsteinFunction f(MomentFn{0.5});
  const LevelPlan plan = plan_levels(f, eps, 16, 1.0, 1.0, 4);
  // (1+eps)^{m-1} < 2 eps^{-1.5} T^2 (dmax/dmin)
  const double cap = 2.0 * std::pow(eps, -1.5) * 16.0 * 16.0;
  const int bound = 1 + static_cast<int>(std::ceil(std::log(cap) / std::log1p(eps)));
  CHECK(plan.m() <= bound);
  CHECK(plan.m() >= 2);
}

TEST_CASE("ladders are monotone with nonnegative weights across a grid") {
  for (const BernsteinFunctionId id :
       {BernsteinFunctionId{MomentFn{0.3}}, BernsteinFunctionId{MomentFn{0.7}},
        BernsteinFunctionId{Log1pFn{}}, BernsteinFunctionId{SoftCapFn{5.0}}}) {
    const BernsteinFunction f(id);
    for (double eps : {0.1, 0.25, 0.5}) {
      for (std::uint64_t T : {4ull, 64ull, 4096ull}) {
        for (double dmax : {1.0, 8.0}) {
          const LevelPlan plan = plan_levels(f, eps, T, 1.0, dmax, 8);
          const double cap_m =
              2.0 * std::pow(eps, -1.5) * double(T) * double(T) * dmax;
          const int bound =
              1 + static_cast<int>(std::ceil(std::log(cap_m) / std::log1p(eps)));
          CHECK(plan.m() <= bound);
          for (int i = 1; i < plan.m(); ++i) {
            CHECK(plan.levels[i] > plan.levels[i - 1]);
          }
          double weight_sum = 0.0;
          for (double a : plan.weights) {
            CHECK(a >= 0.0);
            weight_sum += a;
          }
          if (!f.step_tail() && plan.m() > 0) {
            // Σ alpha_i = V(tau) - V(tau_m)
            CHECK(weight_sum == doctest::Approx(f.tail(plan.tau) -
                                                f.tail(plan.levels.back()))
                                    .epsilon(1e-6));
          }
        }
      }
    }
  }
}

TEST_CASE("log1p ladders are much shorter than moment ladders") {
  const LevelPlan lp =
      plan_levels(BernsteinFunction(Log1pFn{}), 0.25, 4096, 1.0, 1.0, 4);
  const LevelPlan mp =
      plan_levels(BernsteinFunction(MomentFn{0.5}), 0.25, 4096, 1.0, 1.0, 4);
  CHECK(lp.m() < mp.m());
}

TEST_CASE("per-level emission probability is 1 - exp(-delta tau_i)") {
  const LevelPlan plan =
      plan_levels(BernsteinFunction(MomentFn{0.5}), 0.3, 4, 1.0, 2.0, 1);
  REQUIRE(plan.m() >= 3);
  BernsteinElementMap map(plan, 1.0, 2.0, RngSeed{41});

  const int kDraws = 1000000;
  const double delta = 2.0;
  std::vector<long long> hits(plan.m(), 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto emitted = map.map(UpdateOp::inc(1, delta));
    for (int lvl = 0; lvl < plan.m(); ++lvl) {
      hits[lvl] += !emitted[lvl].empty();
    }
  }
  for (int lvl = 0; lvl < std::min(4, plan.m()); ++lvl) {
    const double expected = -std::expm1(-delta * plan.levels[lvl]);
    const double freq = static_cast<double>(hits[lvl]) / kDraws;
    CHECK(std::abs(freq - expected) < 0.003);
  }
}

TEST_CASE("emission probability tends to 1 for levels far past the atom") {
  // soft cap with the atom at t = 100: the single level sits far out and the
  // per-element emission probability 1 - e^{-delta tau_1} is essentially 1.
  const LevelPlan plan =
      plan_levels(BernsteinFunction(SoftCapFn{0.01}), 0.3, 2, 1.0, 1.0, 1);
  REQUIRE(plan.m() == 1);
  const double expected = -std::expm1(-1.0 * plan.levels[0]);
  CHECK(expected > 0.999999);
  BernsteinElementMap map(plan, 1.0, 1.0, RngSeed{42});
  int emitted = 0;
  for (int i = 0; i < 20000; ++i) {
    emitted += !map.map(UpdateOp::inc(1, 1.0))[0].empty();
  }
  CHECK(emitted == 20000);
}

TEST_CASE("resets delete every derived key from every level") {
  const LevelPlan plan =
      plan_levels(BernsteinFunction(MomentFn{0.5}), 0.3, 8, 0.5, 3.0, 5);
  BernsteinElementMap sk(plan, 0.5, 3.0, RngSeed{43});
  const int m = plan.m();
  const int r = 5;

  // Replay emissions into exact per-level active sets.
  std::vector<std::set<Key>> active(m);
  const auto feed = [&](const UpdateOp& op) {
    const auto emitted = sk.map(op);
    for (int i = 0; i < m; ++i) {
      for (const auto& e : emitted[i]) {
        if (const auto* ins = e.get_if<InsertOp>()) active[i].insert(ins->key);
        if (const auto* del = e.get_if<DeleteOp>()) active[i].erase(del->key);
      }
    }
  };
  feed(UpdateOp::inc(7, 2.0));
  feed(UpdateOp::inc(9, 1.0));
  feed(UpdateOp::inc(7, 0.5));
  feed(UpdateOp::reset_key(7));
  for (int i = 0; i < m; ++i) {
    for (int k = 1; k <= r; ++k) {
      CHECK(active[i].count(BernsteinSketch::output_key(7, k)) == 0);
    }
  }
}

TEST_CASE("reset exactness: replay equals a run that never saw the key") {
  // Feed a random resettable stream; every time the distinguished key is
  // fully reset, the per-level active sets must coincide with a parallel
  // replay from which that key's ops were dropped.
  RandomSource rng(RngSeed{44});
  for (int trial = 0; trial < 40; ++trial) {
    const LevelPlan plan =
        plan_levels(BernsteinFunction(Log1pFn{}), 0.4, 64, 0.5, 2.0, 3);
    BernsteinElementMap with_key(plan, 0.5, 2.0, RngSeed{rng.next_u64()});
    const int m = plan.m();
    std::vector<std::set<Key>> active(m), active_without(m);

    const Key special = 3;
    const auto ops = testutil::random_resettable_stream(rng, 64, 4, 0.35, false);
    for (const auto& op : ops) {
      UpdateOp fixed = op;
      if (const auto* inc = op.get_if<IncOp>()) {
        fixed = UpdateOp::inc(inc->key, 0.5 + std::fmod(inc->delta, 1.5));
      }
      const auto emitted = with_key.map(fixed);
      const bool is_special =
          (fixed.get_if<IncOp>() && fixed.get_if<IncOp>()->key == special) ||
          (fixed.get_if<ResetKeyOp>() && fixed.get_if<ResetKeyOp>()->key == special);
      for (int i = 0; i < m; ++i) {
        for (const auto& e : emitted[i]) {
          if (const auto* ins = e.get_if<InsertOp>()) {
            active[i].insert(ins->key);
            if (!is_special) active_without[i].insert(ins->key);
          }
          if (const auto* del = e.get_if<DeleteOp>()) {
            active[i].erase(del->key);
            if (!is_special) active_without[i].erase(del->key);
          }
        }
      }
      if (fixed.get_if<ResetKeyOp>() && fixed.get_if<ResetKeyOp>()->key == special) {
        CHECK(active == active_without);
      }
    }
  }
}

TEST_CASE("expected distinct count matches r * complement-transform") {
  // E[Distinct(E_i)] = r Σ_x (1 - e^{-w_x tau_i}) on an increments-only
  // prefix; Monte Carlo to 1%.
  const std::map<Key, double> dataset = {
      {1, 0.8}, {2, 1.6}, {3, 2.4}, {4, 1.0}, {5, 3.0}};
  BernsteinSketch::Options o;
  o.f = MomentFn{0.5};
  o.eps = 0.35;
  o.T = 5;
  o.delta_min = 0.5;
  o.delta_max = 3.0;
  o.r = 4;
  o.mode = NoiseMode::kZero;

  const LevelPlan plan =
      plan_levels(BernsteinFunction(o.f), o.eps, o.T, o.delta_min, o.delta_max, o.r);
  const int check_level = std::min(3, plan.m() - 1);

  const int kTrials = 20000;
  double total = 0.0;
  for (int trial = 0; trial < kTrials; ++trial) {
    BernsteinElementMap map(plan, o.delta_min, o.delta_max,
                            RngSeed{derive_seed(4500, trial)});
    std::set<Key> active;
    for (const auto& [k, w] : dataset) {
      const auto emitted = map.map(UpdateOp::inc(k, w));
      for (const auto& e : emitted[check_level]) {
        active.insert(e.get_if<InsertOp>()->key);
      }
    }
    total += static_cast<double>(active.size());
  }
  double expected = 0.0;
  for (const auto& [k, w] : dataset) {
    expected += -std::expm1(-w * plan.levels[check_level]);
  }
  expected *= o.r;
  CHECK(std::abs(total / kTrials - expected) < 0.01 * expected);
}

TEST_CASE("tail Riemann sum brackets the tail integral") {
  // Σ_i alpha_i L^c(tau_i) vs I = ∫_tau^inf a(t) L^c(t) dt on a small
  // dataset: within the ladder's discretization guarantees.
  const std::map<Key, double> dataset = {{1, 1.0}, {2, 2.5}, {3, 0.6}};
  for (double eps : {0.1, 0.25}) {
    const BernsteinFunctionId id = MomentFn{0.5};
    const BernsteinFunction f(id);
    const LevelPlan plan = plan_levels(f, eps, 8, 0.6, 2.5, 4);
    const double riemann = expected_tail_estimate(plan, dataset);
    const double integral = transform_integral(id, [&](double t) {
      if (t < plan.tau) return 0.0;
      double lc = 0.0;
      for (const auto& [k, w] : dataset) lc += -std::expm1(-w * t);
      return lc;
    });
    const double floor_slack = plan.v_floor * 8.0;
    CHECK(riemann >= (1.0 - eps) * integral - floor_slack - 1e-9);
    CHECK(riemann <=
          (1.0 + 3 * eps) * integral + eps * f.value(0.6) + floor_slack + 1e-9);
  }
}

TEST_CASE("estimator is zero on an empty dataset") {
  BernsteinSketch::Options o;
  o.f = SoftCapFn{10.0};
  o.eps = 0.25;
  o.T = 4;
  o.r = 4;
  o.mode = NoiseMode::kZero;
  BernsteinSketch sk(o, RngSeed{46});
  CHECK(sk.estimate() == 0.0);
  sk.process(UpdateOp::inc(1, 1.0));
  sk.process(UpdateOp::reset_key(1));
  // all contributions undone: the zero-clamp floor applies
  CHECK(sk.estimate() == 0.0);
}

TEST_CASE("soft cap end-to-end estimate lands within eps of the exact value") {
  // 200 unit keys under SoftCap(10), zero-noise sub-sketches.
  BernsteinSketch::Options o;
  o.f = SoftCapFn{10.0};
  o.eps = 0.25;
  o.delta = 0.05;
  o.T = 200;
  o.r = 64;
  o.mode = NoiseMode::kZero;
  const double exact = 200.0 * 10.0 * (1.0 - std::exp(-0.1));
  int pass = 0;
  for (int s = 0; s < 20; ++s) {
    BernsteinSketch sk(o, RngSeed{derive_seed(4700, s)});
    double est = 0.0;
    for (Key k = 1; k <= 200; ++k) est = sk.process(UpdateOp::inc(k, 1.0));
    pass += std::abs(est - exact) <= o.eps * exact;
  }
  CHECK(pass >= 18);
}

TEST_CASE("moment single-key estimate lands within eps of f(v)") {
  BernsteinSketch::Options o;
  o.f = MomentFn{0.5};
  o.eps = 0.25;
  o.delta = 0.05;
  o.T = 4;
  o.r = 256;
  o.mode = NoiseMode::kZero;
  int pass = 0;
  for (int s = 0; s < 20; ++s) {
    BernsteinSketch sk(o, RngSeed{derive_seed(4800, s)});
    double est = 0.0;
    for (int i = 0; i < 4; ++i) est = sk.process(UpdateOp::inc(9, 1.0));
    pass += std::abs(est - 2.0) <= o.eps * 2.0;
  }
  CHECK(pass >= 18);
}

TEST_CASE("map rejects out-of-range increments and oversized keys") {
  BernsteinSketch::Options o;
  o.f = MomentFn{0.5};
  o.eps = 0.3;
  o.T = 4;
  o.delta_min = 1.0;
  o.delta_max = 2.0;
  o.r = 2;
  o.mode = NoiseMode::kZero;
  BernsteinSketch sk(o, RngSeed{47});
  CHECK_THROWS_AS(sk.map_update(UpdateOp::inc(1, 0.5)), ValidationError);
  CHECK_THROWS_AS(sk.map_update(UpdateOp::inc(1, 2.5)), ValidationError);
  CHECK_THROWS_AS(sk.map_update(UpdateOp::insert(1)), ValidationError);
  CHECK_THROWS_AS(sk.map_update(UpdateOp::inc(Key{1} << 57, 1.0)),
                  ValidationError);
  CHECK(BernsteinSketch::output_key(5, 1) == ((Key{5} << 8) | 0));
  CHECK_THROWS_AS(BernsteinSketch::output_key(5, 300), ValidationError);
}
