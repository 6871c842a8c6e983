// Copyright 2026 The vdmesim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "vdme/estimator.hpp"

using namespace vdme;

namespace {

CircuitPlan two_slot_plan(std::uint64_t seed) {
  Rng rng(seed, 0);
  const DensityMatrix sigma = random_state(4, StateKind::mixed, rng.next_u64());
  const Observable obs = make_observable(random_hermitian(4, rng, 1.0));
  std::vector<CMat> inter = {random_unitary(4, rng), random_unitary(4, rng),
                             random_unitary(4, rng)};
  SlotSpec s0;
  s0.kind = SlotKind::general;
  s0.T = 0.5;
  s0.rho = random_state(2, StateKind::mixed, rng.next_u64());
  s0.eps = 1e-4;
  s0.r = 2;
  SlotSpec s1;
  s1.kind = SlotKind::controlled;
  s1.T = -0.8;
  s1.rho = random_state(2, StateKind::mixed, rng.next_u64());
  s1.eps = 1e-4;
  s1.r = 3;
  return make_circuit_plan(sigma, obs, inter, {s0, s1});
}

}  // namespace

TEST_CASE("make_circuit_plan rejects inconsistent inputs") {
  Rng rng(80, 0);
  const DensityMatrix sigma = random_state(4, StateKind::mixed, 1);
  const Observable obs4 = make_observable(random_hermitian(4, rng, 1.0));
  const Observable obs2 = make_observable(random_hermitian(2, rng, 1.0));
  const CMat v4 = random_unitary(4, rng);
  SlotSpec slot;
  slot.kind = SlotKind::general;
  slot.T = 0.5;
  slot.rho = random_state(2, StateKind::mixed, 2);

  CHECK_NOTHROW(make_circuit_plan(sigma, obs4, {v4, v4}, {slot}));
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs2, {v4, v4}, {slot}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4}, {slot}),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4, 0.5 * v4}, {slot}),
                  std::invalid_argument);

  SlotSpec bad_dim = slot;
  bad_dim.rho = random_state(3, StateKind::mixed, 3);
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4, v4}, {bad_dim}),
                  std::invalid_argument);

  SlotSpec bad_eps = slot;
  bad_eps.eps = 0.7;
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4, v4}, {bad_eps}),
                  std::invalid_argument);

  SlotSpec mixed_pure = slot;
  mixed_pure.kind = SlotKind::pure;
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4, v4}, {mixed_pure}),
                  std::invalid_argument);

  // controlled slot needs 2 * rho.dim to divide the register
  SlotSpec ctrl = slot;
  ctrl.kind = SlotKind::controlled;
  ctrl.rho = random_state(4, StateKind::mixed, 4);
  CHECK_THROWS_AS(make_circuit_plan(sigma, obs4, {v4, v4}, {ctrl}),
                  std::invalid_argument);
}

TEST_CASE("plan_segments keeps the total overhead under gamma") {
  CHECK(plan_segments(std::sqrt(2.0), 2) == 12);
  CHECK(plan_segments(std::exp(1.0), 1) == 2);
  CHECK(plan_segments(std::exp(1.0), 3) == 6);
  CHECK(plan_segments(2.0, 0) == 1);
  CHECK_THROWS_AS(plan_segments(1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(plan_segments(0.5, 2), std::invalid_argument);

  // r = ceil(2M/ln gamma) makes (e^{2 T^2 / r})^M <= gamma for |T| <= 1
  for (double gamma : {1.1, std::sqrt(2.0), 4.0}) {
    for (int m : {1, 2, 5}) {
      const long r = plan_segments(gamma, m);
      const double worst = std::exp(2.0 * m / static_cast<double>(r));
      CHECK(worst <= gamma * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("choose_segments never drops below the series validity floor") {
  Rng rng(81, 0);
  const DensityMatrix sigma = random_state(2, StateKind::mixed, 5);
  const Observable obs = make_observable(random_hermitian(2, rng, 1.0));
  const CMat v = random_unitary(2, rng);
  SlotSpec slot;
  slot.kind = SlotKind::general;
  slot.T = 5.0;
  slot.rho = random_state(2, StateKind::mixed, 6);
  CircuitPlan plan = make_circuit_plan(sigma, obs, {v, v}, {slot});

  choose_segments(plan, std::exp(100.0));  // uniform choice would give r = 1
  CHECK(plan.slots[0].r == 5);

  choose_segments(plan, std::sqrt(2.0));
  CHECK(plan.slots[0].r == static_cast<int>(plan_segments(std::sqrt(2.0), 1)));
}

TEST_CASE("estimate_exact folds the interleaved circuit correctly") {
  const CircuitPlan plan = two_slot_plan(82);
  const ExactEstimate est = estimate_exact(plan);

  // independent fold with the building blocks applied by hand
  const SlotSpec& s0 = plan.slots[0];
  const SlotSpec& s1 = plan.slots[1];
  const SeriesSpec spec0 = build_series(s0.T, s0.r, s0.eps);
  const SeriesSpec spec1 = build_series(s1.T, s1.r, s1.eps);
  const SuperOp mean0 =
      scale(exact_mean_general(spec0, s0.rho, 0).mean, spec0.overhead);
  const SuperOp mean1 =
      scale(exact_mean_controlled(spec1, s1.rho, 0).mean, spec1.overhead);
  const SuperOp target0 = unitary_channel(herm_exp(s0.rho.mat, s0.T));
  const SuperOp target1 = controlled_target(s1.rho, s1.T);

  CMat st = plan.sigma.mat;
  CMat ideal = plan.sigma.mat;
  st = plan.interleavers[0] * st * plan.interleavers[0].adjoint();
  ideal = plan.interleavers[0] * ideal * plan.interleavers[0].adjoint();
  st = embed_left(mean0, 2).apply(st);
  ideal = embed_left(target0, 2).apply(ideal);
  st = plan.interleavers[1] * st * plan.interleavers[1].adjoint();
  ideal = plan.interleavers[1] * ideal * plan.interleavers[1].adjoint();
  st = mean1.apply(st);
  ideal = target1.apply(ideal);
  st = plan.interleavers[2] * st * plan.interleavers[2].adjoint();
  ideal = plan.interleavers[2] * ideal * plan.interleavers[2].adjoint();

  CHECK(est.value ==
        doctest::Approx(std::real((plan.obs.mat * st).trace())).epsilon(1e-12));
  CHECK(est.ideal == doctest::Approx(std::real((plan.obs.mat * ideal).trace()))
                         .epsilon(1e-12));
  CHECK(est.overhead ==
        doctest::Approx(spec0.overhead * spec1.overhead).epsilon(1e-12));

  REQUIRE(est.slot_choi_upper.size() == 2);
  CHECK(est.slot_choi_upper[0] ==
        doctest::Approx(diamond_bounds(mean0, target0).second).epsilon(1e-10));
  CHECK(est.slot_choi_upper[1] ==
        doctest::Approx(diamond_bounds(mean1, target1).second).epsilon(1e-10));
  const double delta = std::max(est.slot_choi_upper[0], est.slot_choi_upper[1]);
  const double want_bias =
      op_norm(plan.obs.mat) * 2.0 * delta * std::exp(2.0 * delta);
  CHECK(est.bias_bound == doctest::Approx(want_bias).epsilon(1e-12));
  CHECK(bias_bound(plan) == doctest::Approx(want_bias).epsilon(1e-12));
  CHECK(est.choi_upper_max == doctest::Approx(delta).epsilon(1e-12));

  // accurate per-slot series makes the bias bound honest and small
  CHECK(std::abs(est.value - est.ideal) <= est.bias_bound + 1e-12);
  CHECK(est.bias_bound < 1e-2);
}

TEST_CASE("a plan without slots reduces to a plain measurement") {
  Rng rng(83, 0);
  const DensityMatrix sigma = random_state(3, StateKind::mixed, 9);
  const Observable obs = make_observable(random_hermitian(3, rng, 1.0));
  const CMat v = random_unitary(3, rng);
  const CircuitPlan plan = make_circuit_plan(sigma, obs, {v}, {});
  const ExactEstimate est = estimate_exact(plan);
  const double want =
      std::real((obs.mat * v * sigma.mat * v.adjoint()).trace());
  CHECK(est.value == doctest::Approx(want).epsilon(1e-13));
  CHECK(est.ideal == doctest::Approx(want).epsilon(1e-13));
  CHECK(est.overhead == doctest::Approx(1.0));
  CHECK(est.bias_bound == 0.0);
}

TEST_CASE("pure slots are exact so value equals ideal") {
  Rng rng(84, 0);
  const DensityMatrix sigma = random_state(4, StateKind::mixed, 11);
  const Observable obs = make_observable(random_hermitian(4, rng, 1.0));
  std::vector<CMat> inter = {random_unitary(4, rng), random_unitary(4, rng),
                             random_unitary(4, rng)};
  SlotSpec p0;
  p0.kind = SlotKind::pure;
  p0.T = 0.7;
  p0.rho = random_state(2, StateKind::pure, 12);
  SlotSpec p1 = p0;
  p1.T = -2.4;
  p1.rho = random_state(2, StateKind::pure, 13);
  const CircuitPlan plan = make_circuit_plan(sigma, obs, inter, {p0, p1});
  const ExactEstimate est = estimate_exact(plan);
  CHECK(std::abs(est.value - est.ideal) < 1e-9);
  CHECK(est.choi_upper_max < 1e-9);
  CHECK(est.overhead <= std::exp(2.0) + 1e-9);
}

TEST_CASE("shot estimator is unbiased against the exact expectation") {
  Rng rng(85, 0);
  const DensityMatrix sigma = random_state(2, StateKind::mixed, 21);
  const Observable obs = make_observable(random_hermitian(2, rng, 1.0));
  std::vector<CMat> inter = {random_unitary(2, rng), random_unitary(2, rng)};
  SlotSpec slot;
  slot.kind = SlotKind::general;
  slot.T = 0.5;
  slot.rho = random_state(2, StateKind::mixed, 22);
  slot.eps = 1e-4;
  slot.r = 2;
  const CircuitPlan plan = make_circuit_plan(sigma, obs, inter, {slot});
  const ExactEstimate exact = estimate_exact(plan);

  const long shots = 20000;
  const EstimatorReport rep = estimate_shots(plan, shots, 4242);
  CHECK(rep.samples == shots);
  CHECK(rep.std_error > 0.0);
  CHECK(std::abs(rep.mean - exact.value) < 5.0 * rep.std_error);
  CHECK(rep.overhead == doctest::Approx(exact.overhead).epsilon(1e-12));
  CHECK(rep.variance_amplification ==
        doctest::Approx(rep.overhead * rep.overhead).epsilon(1e-12));
  CHECK(rep.bias_bound == doctest::Approx(exact.bias_bound).epsilon(1e-12));

  // copy statistics respect the per-run bounds
  const SeriesSpec spec = build_series(slot.T, slot.r, slot.eps);
  CHECK(rep.copies_min >= 2L * spec.r);
  CHECK(rep.copies_max <= copy_count_bound(spec));
  CHECK(rep.copies_mean >= static_cast<double>(rep.copies_min));
  CHECK(rep.copies_mean <= static_cast<double>(rep.copies_max));
  CHECK(rep.copies_mean ==
        doctest::Approx(mean_copy_count(spec)).epsilon(0.05));

  // single-run estimates are bounded by overhead * ||obs||
  CHECK(std::abs(rep.mean) <= rep.overhead * op_norm(obs.mat) + 1e-12);
}

TEST_CASE("pure slot shots have a fixed copy cost") {
  Rng rng(86, 0);
  const DensityMatrix sigma = random_state(2, StateKind::mixed, 31);
  const Observable obs = make_observable(random_hermitian(2, rng, 1.0));
  std::vector<CMat> inter = {random_unitary(2, rng), random_unitary(2, rng)};
  SlotSpec slot;
  slot.kind = SlotKind::pure;
  slot.T = 1.0;
  slot.rho = random_state(2, StateKind::pure, 32);
  const CircuitPlan plan = make_circuit_plan(sigma, obs, inter, {slot});
  const ExactEstimate exact = estimate_exact(plan);

  const EstimatorReport rep = estimate_shots(plan, 20000, 777);
  const PureSpec ps = make_pure_spec(slot.T);
  CHECK(rep.copies_min == 2L * ps.r);
  CHECK(rep.copies_max == 2L * ps.r);
  CHECK(rep.copies_mean == doctest::Approx(2.0 * ps.r));
  CHECK(std::abs(rep.mean - exact.value) < 5.0 * rep.std_error);
}

TEST_CASE("controlled slot shots agree with the exact fold") {
  const CircuitPlan plan = two_slot_plan(87);
  const ExactEstimate exact = estimate_exact(plan);
  const EstimatorReport rep = estimate_shots(plan, 30000, 901);
  CHECK(std::abs(rep.mean - exact.value) < 5.0 * rep.std_error);
  CHECK(rep.overhead == doctest::Approx(exact.overhead).epsilon(1e-12));
}

TEST_CASE("shot results are bit identical for any worker count") {
  const CircuitPlan plan = two_slot_plan(88);
  const long shots = 3 * 1024 + 257;  // exercises a ragged final chunk
  const EstimatorReport r1 = estimate_shots(plan, shots, 555, 1);
  const EstimatorReport r3 = estimate_shots(plan, shots, 555, 3);
  const EstimatorReport r8 = estimate_shots(plan, shots, 555, 8);
  CHECK(r1.mean == r3.mean);
  CHECK(r1.mean == r8.mean);
  CHECK(r1.std_error == r3.std_error);
  CHECK(r1.std_error == r8.std_error);
  CHECK(r1.copies_min == r8.copies_min);
  CHECK(r1.copies_max == r8.copies_max);
  CHECK(r1.copies_mean == r8.copies_mean);

  // reruns with the same seed reproduce; a new seed moves the mean
  const EstimatorReport again = estimate_shots(plan, shots, 555, 2);
  CHECK(again.mean == r1.mean);
  const EstimatorReport other = estimate_shots(plan, shots, 556, 2);
  CHECK(other.mean != r1.mean);

  CHECK_THROWS_AS(estimate_shots(plan, 0, 1), std::invalid_argument);
}
