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

#include "vdme/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace vdme {

namespace {

struct SlotRuntime {
  SlotKind kind = SlotKind::general;
  SeriesSpec spec;
  PureSpec ps;
  CMat rho;
  int d_rho = 0;
  int d_sys = 0;
  int d_idle = 0;
  bool controlled = false;
  double overhead = 1.0;
  long copies_min = 0;
  long copies_max = 0;
  double copies_mean = 0.0;
  SuperOp mean_norm;  // rescaled mean map on d_sys
  SuperOp target;
};

SlotRuntime build_runtime(const SlotSpec& s, int dim) {
  SlotRuntime rt;
  rt.kind = s.kind;
  rt.rho = s.rho.mat;
  rt.d_rho = s.rho.dim();
  rt.controlled = (s.kind == SlotKind::controlled);
  rt.d_sys = rt.controlled ? 2 * rt.d_rho : rt.d_rho;
  if (dim % rt.d_sys != 0)
    throw std::invalid_argument("slot dimension does not divide plan dim");
  rt.d_idle = dim / rt.d_sys;
  if (s.kind == SlotKind::pure) {
    rt.ps = make_pure_spec(s.T, s.r);
    rt.overhead = rt.ps.overhead;
    rt.copies_min = rt.copies_max = 2L * rt.ps.r;
    rt.copies_mean = 2.0 * rt.ps.r;
    rt.mean_norm = scale(exact_mean_pure(rt.ps, rt.rho), rt.overhead);
    rt.target = unitary_channel(herm_exp(rt.rho, s.T));
  } else {
    const int r = s.r > 0 ? s.r : default_general_segments(s.T);
    rt.spec = build_series(s.T, r, s.eps);
    rt.overhead = rt.spec.overhead;
    rt.copies_min = 2L * rt.spec.r;
    rt.copies_max = copy_count_bound(rt.spec);
    rt.copies_mean = mean_copy_count(rt.spec);
    const DensityMatrix dm{rt.rho};
    if (rt.controlled) {
      rt.mean_norm =
          scale(exact_mean_controlled(rt.spec, dm, 0).mean, rt.overhead);
      rt.target = controlled_target(dm, s.T);
    } else {
      rt.mean_norm =
          scale(exact_mean_general(rt.spec, dm, 0).mean, rt.overhead);
      rt.target = unitary_channel(herm_exp(rt.rho, s.T));
    }
  }
  return rt;
}

std::vector<SlotRuntime> build_runtimes(const CircuitPlan& plan) {
  std::vector<SlotRuntime> rts;
  rts.reserve(plan.slots.size());
  for (const auto& s : plan.slots) rts.push_back(build_runtime(s, plan.dim));
  return rts;
}

double bias_from(const CircuitPlan& plan, const std::vector<double>& chois) {
  if (chois.empty()) return 0.0;
  const double delta = *std::max_element(chois.begin(), chois.end());
  const double m = static_cast<double>(chois.size());
  return op_norm(plan.obs.mat) * m * delta * std::exp(m * delta);
}

CMat conj_by(const CMat& u, const CMat& a) { return u * a * u.adjoint(); }

}  // namespace

CircuitPlan make_circuit_plan(const DensityMatrix& sigma, const Observable& obs,
                              const std::vector<CMat>& interleavers,
                              const std::vector<SlotSpec>& slots) {
  CircuitPlan plan;
  plan.dim = sigma.dim();
  plan.sigma = sigma;
  plan.obs = obs;
  plan.interleavers = interleavers;
  plan.slots = slots;
  if (obs.dim() != plan.dim)
    throw std::invalid_argument("plan: observable dimension mismatch");
  if (interleavers.size() != slots.size() + 1)
    throw std::invalid_argument("plan: need one interleaver per layer + 1");
  for (const auto& v : interleavers) {
    if (v.rows() != plan.dim || !is_unitary(v))
      throw std::invalid_argument("plan: interleaver not unitary");
  }
  for (const auto& s : slots) {
    const int d_sys =
        (s.kind == SlotKind::controlled) ? 2 * s.rho.dim() : s.rho.dim();
    if (plan.dim % d_sys != 0)
      throw std::invalid_argument("plan: slot dimension does not divide dim");
    if (s.eps <= 0.0 || s.eps > 0.5)
      throw std::invalid_argument("plan: slot eps out of range");
    if (s.kind == SlotKind::pure) {
      const double purity = std::real((s.rho.mat * s.rho.mat).trace());
      if (std::abs(purity - 1.0) > 1e-8)
        throw std::invalid_argument("plan: pure slot state is not pure");
    }
  }
  return plan;
}

long plan_segments(double gamma, int m_slots) {
  if (gamma <= 1.0)
    throw std::invalid_argument("plan_segments: gamma must exceed 1");
  if (m_slots <= 0) return 1;
  const long r =
      static_cast<long>(std::ceil(2.0 * m_slots / std::log(gamma)));
  return std::max(1L, r);
}

void choose_segments(CircuitPlan& plan, double gamma) {
  const long r = plan_segments(gamma, static_cast<int>(plan.slots.size()));
  for (auto& s : plan.slots) {
    const long floor_t = static_cast<long>(std::ceil(std::abs(s.T)));
    s.r = static_cast<int>(std::max(r, std::max(1L, floor_t)));
  }
}

ExactEstimate estimate_exact(const CircuitPlan& plan) {
  const auto rts = build_runtimes(plan);
  ExactEstimate est;
  est.overhead = 1.0;
  CMat st = plan.sigma.mat;
  CMat ideal = plan.sigma.mat;
  for (std::size_t m = 0; m < rts.size(); ++m) {
    st = conj_by(plan.interleavers[m], st);
    ideal = conj_by(plan.interleavers[m], ideal);
    const SuperOp mean_full = embed_left(rts[m].mean_norm, rts[m].d_idle);
    const SuperOp target_full = embed_left(rts[m].target, rts[m].d_idle);
    st = mean_full.apply(st);
    ideal = target_full.apply(ideal);
    est.overhead *= rts[m].overhead;
    est.slot_choi_upper.push_back(
        diamond_bounds(rts[m].mean_norm, rts[m].target).second);
  }
  st = conj_by(plan.interleavers.back(), st);
  ideal = conj_by(plan.interleavers.back(), ideal);
  est.value = std::real((plan.obs.mat * st).trace());
  est.ideal = std::real((plan.obs.mat * ideal).trace());
  est.choi_upper_max =
      est.slot_choi_upper.empty()
          ? 0.0
          : *std::max_element(est.slot_choi_upper.begin(),
                              est.slot_choi_upper.end());
  est.bias_bound = bias_from(plan, est.slot_choi_upper);
  return est;
}

double bias_bound(const CircuitPlan& plan) {
  const auto rts = build_runtimes(plan);
  std::vector<double> chois;
  chois.reserve(rts.size());
  for (const auto& rt : rts)
    chois.push_back(diamond_bounds(rt.mean_norm, rt.target).second);
  return bias_from(plan, chois);
}

namespace {

struct ChunkAcc {
  double sum = 0.0;
  double sumsq = 0.0;
  double copies_sum = 0.0;
  long copies_min = std::numeric_limits<long>::max();
  long copies_max = 0;
};

struct ShotContext {
  const CircuitPlan* plan = nullptr;
  const std::vector<SlotRuntime>* rts = nullptr;
  CMat obs_vecs;
  Eigen::VectorXd obs_vals;
  double total_overhead = 1.0;
};

void run_shot(const ShotContext& ctx, std::uint64_t seed, long shot_index,
              double* value_out, long* copies_out) {
  const CircuitPlan& plan = *ctx.plan;
  const int d = plan.dim;
  Rng rng(seed, static_cast<std::uint64_t>(shot_index));
  double sign = 1.0;
  long copies = 0;
  CMat st = plan.sigma.mat;
  CMat tau(2 * d, 2 * d);
  for (std::size_t m = 0; m < ctx.rts->size(); ++m) {
    const SlotRuntime& rt = (*ctx.rts)[m];
    st = conj_by(plan.interleavers[m], st);
    // dilate with the readout ancilla in |+>
    tau.topLeftCorner(d, d) = 0.5 * st;
    tau.topRightCorner(d, d) = 0.5 * st;
    tau.bottomLeftCorner(d, d) = 0.5 * st;
    tau.bottomRightCorner(d, d) = 0.5 * st;
    if (rt.kind == SlotKind::pure) {
      const std::vector<double> probs = {rt.ps.p0, rt.ps.p1};
      const double phi_prime = rt.ps.phi + 0.5 * kPi;
      for (int j = 0; j < rt.ps.r; ++j) {
        const int bl = rng.categorical(probs);
        const int br = rng.categorical(probs);
        if (br == 0) {
          step_dilated_state(tau, rt.rho, rt.d_idle, rt.ps.theta0,
                             Side::right);
        } else {
          step_dilated_state(tau, rt.rho, rt.d_idle, 0.5 * kPi, Side::right);
          phase_dilated_state(tau, phi_prime, 1);
        }
        if (bl == 0) {
          step_dilated_state(tau, rt.rho, rt.d_idle, rt.ps.theta0,
                             Side::left);
        } else {
          step_dilated_state(tau, rt.rho, rt.d_idle, 0.5 * kPi, Side::left);
          phase_dilated_state(tau, phi_prime, 0);
        }
        copies += 2;
      }
    } else {
      const bool ctrl = rt.controlled;
      const double sgn = rt.spec.T >= 0.0 ? 1.0 : -1.0;
      for (int j = 0; j < rt.spec.r; ++j) {
        const int l = rng.categorical(rt.spec.prob);
        const int lp = rng.categorical(rt.spec.prob);
        step_dilated_state(tau, rt.rho, rt.d_idle, sgn * rt.spec.theta[lp],
                           Side::right, ctrl);
        for (int k = 0; k < 2 * lp; ++k)
          step_dilated_state(tau, rt.rho, rt.d_idle, 0.5 * kPi, Side::right,
                             ctrl);
        step_dilated_state(tau, rt.rho, rt.d_idle, sgn * rt.spec.theta[l],
                           Side::left, ctrl);
        for (int k = 0; k < 2 * l; ++k)
          step_dilated_state(tau, rt.rho, rt.d_idle, 0.5 * kPi, Side::left,
                             ctrl);
        copies += 2 + 2L * (l + lp);
      }
    }
    // ancilla X measurement collapses the register
    const CMat diag_sum = tau.topLeftCorner(d, d) + tau.bottomRightCorner(d, d);
    const CMat off_sum = tau.topRightCorner(d, d) + tau.bottomLeftCorner(d, d);
    const CMat plus_m = 0.5 * (diag_sum + off_sum);
    const CMat minus_m = 0.5 * (diag_sum - off_sum);
    const double pp = std::max(0.0, std::real(plus_m.trace()));
    const double pm = std::max(0.0, std::real(minus_m.trace()));
    const double tot = pp + pm;
    if (tot <= 0.0) {
      st = 0.5 * diag_sum;  // degenerate; keep going with the raw average
      continue;
    }
    if (rng.uniform() * tot < pp) {
      st = plus_m / pp;
    } else {
      st = minus_m / pm;
      sign = -sign;
    }
    st = 0.5 * (st + st.adjoint().eval());
  }
  st = conj_by(plan.interleavers.back(), st);
  std::vector<double> probs(d);
  double total = 0.0;
  for (int k = 0; k < d; ++k) {
    const CVec v = ctx.obs_vecs.col(k);
    probs[k] = std::max(0.0, std::real(v.dot(st * v)));
    total += probs[k];
  }
  int k = 0;
  if (total > 0.0) {
    for (auto& p : probs) p /= total;
    k = rng.categorical(probs);
  } else {
    k = static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
  }
  *value_out = sign * ctx.obs_vals(k) * ctx.total_overhead;
  *copies_out = copies;
}

}  // namespace

EstimatorReport estimate_shots(const CircuitPlan& plan, long shots,
                               std::uint64_t seed, int workers) {
  if (shots <= 0) throw std::invalid_argument("estimate_shots: shots <= 0");
  if (workers < 1) workers = 1;
  const auto rts = build_runtimes(plan);
  ShotContext ctx;
  ctx.plan = &plan;
  ctx.rts = &rts;
  Eigen::SelfAdjointEigenSolver<CMat> es(plan.obs.mat);
  ctx.obs_vecs = es.eigenvectors();
  ctx.obs_vals = es.eigenvalues();
  ctx.total_overhead = 1.0;
  std::vector<double> chois;
  for (const auto& rt : rts) {
    ctx.total_overhead *= rt.overhead;
    chois.push_back(diamond_bounds(rt.mean_norm, rt.target).second);
  }

  constexpr long kChunk = 1024;
  const long n_chunks = (shots + kChunk - 1) / kChunk;
  std::vector<ChunkAcc> accs(static_cast<std::size_t>(n_chunks));
  auto run_range = [&](int w) {
    for (long ci = w; ci < n_chunks; ci += workers) {
      const long lo = ci * kChunk;
      const long hi = std::min(shots, lo + kChunk);
      ChunkAcc acc;
      for (long s = lo; s < hi; ++s) {
        double value = 0.0;
        long copies = 0;
        run_shot(ctx, seed, s, &value, &copies);
        acc.sum += value;
        acc.sumsq += value * value;
        acc.copies_sum += static_cast<double>(copies);
        acc.copies_min = std::min(acc.copies_min, copies);
        acc.copies_max = std::max(acc.copies_max, copies);
      }
      accs[static_cast<std::size_t>(ci)] = acc;
    }
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& t : pool) t.join();
  }

  // fixed-order reduction keeps the result independent of the worker count
  ChunkAcc total;
  for (const auto& a : accs) {
    total.sum += a.sum;
    total.sumsq += a.sumsq;
    total.copies_sum += a.copies_sum;
    total.copies_min = std::min(total.copies_min, a.copies_min);
    total.copies_max = std::max(total.copies_max, a.copies_max);
  }

  EstimatorReport rep;
  rep.samples = shots;
  rep.mean = total.sum / static_cast<double>(shots);
  const double var =
      shots > 1
          ? std::max(0.0, (total.sumsq -
                           total.sum * total.sum / static_cast<double>(shots)) /
                              static_cast<double>(shots - 1))
          : 0.0;
  rep.std_error = std::sqrt(var / static_cast<double>(shots));
  rep.overhead = ctx.total_overhead;
  rep.variance_amplification = ctx.total_overhead * ctx.total_overhead;
  rep.bias_bound = bias_from(plan, chois);
  rep.copies_min = total.copies_min;
  rep.copies_max = total.copies_max;
  rep.copies_mean = total.copies_sum / static_cast<double>(shots);
  return rep;
}

}  // namespace vdme
