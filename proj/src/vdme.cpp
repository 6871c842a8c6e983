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

#include "vdme/vdme.hpp"

#include <cmath>
#include <stdexcept>

namespace vdme {

IndexSequence sample_indices(const SeriesSpec& spec, Rng& rng) {
  IndexSequence seq;
  seq.left.resize(spec.r);
  seq.right.resize(spec.r);
  seq.prob = 1.0;
  long extra = 0;
  for (int j = 0; j < spec.r; ++j) {
    seq.left[j] = rng.categorical(spec.prob);
    seq.right[j] = rng.categorical(spec.prob);
    seq.prob *= spec.prob[seq.left[j]] * spec.prob[seq.right[j]];
    extra += seq.left[j] + seq.right[j];
  }
  seq.copies = 2L * spec.r + 2L * extra;
  return seq;
}

CMat general_segment_factor(const SeriesSpec& spec, const DensityMatrix& rho,
                            int l) {
  const int d = rho.dim();
  const CMat id = CMat::Identity(d, d);
  const double sgn = (spec.T >= 0.0) ? 1.0 : -1.0;
  CMat factor = std::cos(spec.theta[l]) * id -
                Cx(0.0, sgn * std::sin(spec.theta[l])) * rho.mat;
  const CMat quarter = Cx(0.0, -1.0) * rho.mat;  // one pi/2 partial swap
  for (int i = 0; i < 2 * l; ++i) factor = quarter * factor;
  return factor;
}

// HP map measured by the X readout: (B A C^dag + C A B^dag)/2
static SuperOp symmetrized_pair(const CMat& b, const CMat& c) {
  const SuperOp bc = asymmetric_map(b, c);
  const SuperOp cb = asymmetric_map(c, b);
  return scale(add(bc, cb), Cx(0.5, 0.0));
}

static DmeSample sample_from_factors(
    const SeriesSpec& spec, const IndexSequence& seq,
    const std::vector<CMat>& factors, int d) {
  CMat b = CMat::Identity(d, d);
  CMat c = CMat::Identity(d, d);
  for (int j = 0; j < spec.r; ++j) {
    b = factors[seq.left[j]] * b;
    c = factors[seq.right[j]] * c;
  }
  return DmeSample{seq, symmetrized_pair(b, c), spec.overhead};
}

static std::vector<CMat> all_general_factors(const SeriesSpec& spec,
                                             const DensityMatrix& rho) {
  std::vector<CMat> factors(spec.L + 1);
  for (int l = 0; l <= spec.L; ++l) {
    factors[l] = general_segment_factor(spec, rho, l);
  }
  return factors;
}

DmeSample sample_from_indices(const SeriesSpec& spec, const DensityMatrix& rho,
                              const IndexSequence& seq) {
  return sample_from_factors(spec, seq, all_general_factors(spec, rho),
                             rho.dim());
}

DmeSample sample_general(const SeriesSpec& spec, const DensityMatrix& rho,
                         Rng& rng) {
  return sample_from_indices(spec, rho, sample_indices(spec, rng));
}

DmeSample sample_general(const SeriesSpec& spec, const DensityMatrix& rho,
                         std::uint64_t seed) {
  Rng rng(seed, 0);
  return sample_general(spec, rho, rng);
}

static ExactMean exact_mean_impl(const SeriesSpec& spec,
                                 const std::vector<CMat>& factors,
                                 const CMat& series_mat, int d,
                                 long enumeration_guard) {
  const int n_idx = spec.L + 1;
  double tuples = std::pow(static_cast<double>(n_idx), 2.0 * spec.r);
  if (tuples <= static_cast<double>(enumeration_guard)) {
    // exhaustive route: odometer over all 2r indices
    std::vector<int> idx(2 * spec.r, 0);
    CMat acc = CMat::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
    while (true) {
      IndexSequence seq;
      seq.left.assign(idx.begin(), idx.begin() + spec.r);
      seq.right.assign(idx.begin() + spec.r, idx.end());
      seq.prob = 1.0;
      for (int v : idx) seq.prob *= spec.prob[v];
      const DmeSample s = sample_from_factors(spec, seq, factors, d);
      acc += seq.prob * s.effective_map.mat;
      int pos = 0;
      while (pos < 2 * spec.r && ++idx[pos] == n_idx) idx[pos++] = 0;
      if (pos == 2 * spec.r) break;
    }
    return ExactMean{SuperOp{acc, d, d}, true};
  }
  // closed-form route: independent segments average to S_L/norm_c per side
  CMat sr = CMat::Identity(d, d);
  for (int j = 0; j < spec.r; ++j) sr = series_mat * sr;
  const double inv = std::exp(-2.0 * spec.r * std::log(spec.norm_c));
  SuperOp mean = scale(asymmetric_map(sr, sr), Cx(inv, 0.0));
  return ExactMean{mean, false};
}

ExactMean exact_mean_general(const SeriesSpec& spec, const DensityMatrix& rho,
                             long enumeration_guard) {
  return exact_mean_impl(spec, all_general_factors(spec, rho),
                         truncated_series_matrix(spec, rho), rho.dim(),
                         enumeration_guard);
}

PureSpec make_pure_spec(double T, int r) {
  if (r == 0) r = default_pure_segments(T);
  if (r < 1) throw std::invalid_argument("make_pure_spec: r must be >= 1");
  PureSpec ps;
  // the target channel is 2*pi-periodic in T; reduce into (-pi, pi]
  ps.T = std::remainder(T, 2.0 * kPi);
  ps.r = r;
  ps.x = ps.T / r;
  const double x = ps.x;
  const double a0 = std::sqrt(1.0 + x * x);
  const Cx rem = std::exp(Cx(0.0, -x)) - Cx(1.0, -x);  // e^{-ix} - (1 - ix)
  const double a1 = std::abs(rem);
  ps.norm_c = a0 + a1;
  ps.p0 = a0 / ps.norm_c;
  ps.p1 = a1 / ps.norm_c;
  ps.theta0 = std::atan(x);
  ps.phi = (a1 > 0.0) ? std::arg(rem) : 0.0;
  ps.overhead = std::exp(2.0 * r * std::log(ps.norm_c));
  return ps;
}

CMat pure_branch_factor(const PureSpec& ps, const CMat& psi_proj, int branch) {
  const int d = static_cast<int>(psi_proj.rows());
  const CMat id = CMat::Identity(d, d);
  if (branch == 0) {
    return std::cos(ps.theta0) * id -
           Cx(0.0, std::sin(ps.theta0)) * psi_proj;
  }
  return std::exp(Cx(0.0, ps.phi)) * psi_proj;
}

DmeSample sample_pure(const PureSpec& ps, const CMat& psi_proj, Rng& rng) {
  const int d = static_cast<int>(psi_proj.rows());
  const CMat w0 = pure_branch_factor(ps, psi_proj, 0);
  const CMat w1 = pure_branch_factor(ps, psi_proj, 1);
  IndexSequence seq;
  seq.left.resize(ps.r);
  seq.right.resize(ps.r);
  seq.prob = 1.0;
  CMat b = CMat::Identity(d, d);
  CMat c = CMat::Identity(d, d);
  const std::vector<double> probs{ps.p0, ps.p1};
  for (int j = 0; j < ps.r; ++j) {
    seq.left[j] = rng.categorical(probs);
    seq.right[j] = rng.categorical(probs);
    seq.prob *= probs[seq.left[j]] * probs[seq.right[j]];
    b = (seq.left[j] == 0 ? w0 : w1) * b;
    c = (seq.right[j] == 0 ? w0 : w1) * c;
  }
  seq.copies = 2L * ps.r;
  return DmeSample{seq, symmetrized_pair(b, c), ps.overhead};
}

SuperOp exact_mean_pure(const PureSpec& ps, const CMat& psi_proj) {
  const CMat w0 = pure_branch_factor(ps, psi_proj, 0);
  const CMat w1 = pure_branch_factor(ps, psi_proj, 1);
  const CMat ew = ps.p0 * w0 + ps.p1 * w1;  // exp(-i psi x)/norm_c
  const int d = static_cast<int>(psi_proj.rows());
  CMat ewr = CMat::Identity(d, d);
  for (int j = 0; j < ps.r; ++j) ewr = ew * ewr;
  return asymmetric_map(ewr, ewr);
}

CMat controlled_segment_factor(const SeriesSpec& spec,
                               const DensityMatrix& rho, int l) {
  SeriesSpec neg = spec;
  neg.T = -spec.T;
  const CMat plus = general_segment_factor(spec, rho, l);
  const CMat minus = general_segment_factor(neg, rho, l);
  const int d = rho.dim();
  CMat out = CMat::Zero(2L * d, 2L * d);
  out.topLeftCorner(d, d) = minus;   // block 0 carries the reversed sign
  out.bottomRightCorner(d, d) = plus;
  return out;
}

CMat controlled_series_matrix(const SeriesSpec& spec,
                              const DensityMatrix& rho) {
  SeriesSpec neg = spec;
  neg.T = -spec.T;
  const CMat plus = truncated_series_matrix(spec, rho);
  const CMat minus = truncated_series_matrix(neg, rho);
  const int d = rho.dim();
  CMat out = CMat::Zero(2L * d, 2L * d);
  out.topLeftCorner(d, d) = minus;
  out.bottomRightCorner(d, d) = plus;
  return out;
}

static std::vector<CMat> all_controlled_factors(const SeriesSpec& spec,
                                                const DensityMatrix& rho) {
  std::vector<CMat> factors(spec.L + 1);
  for (int l = 0; l <= spec.L; ++l) {
    factors[l] = controlled_segment_factor(spec, rho, l);
  }
  return factors;
}

DmeSample sample_controlled(const SeriesSpec& spec, const DensityMatrix& rho,
                            Rng& rng) {
  const IndexSequence seq = sample_indices(spec, rng);
  return sample_from_factors(spec, seq, all_controlled_factors(spec, rho),
                             2 * rho.dim());
}

ExactMean exact_mean_controlled(const SeriesSpec& spec,
                                const DensityMatrix& rho,
                                long enumeration_guard) {
  return exact_mean_impl(spec, all_controlled_factors(spec, rho),
                         controlled_series_matrix(spec, rho), 2 * rho.dim(),
                         enumeration_guard);
}

SuperOp controlled_target(const DensityMatrix& rho, double T) {
  const int d = rho.dim();
  const CMat up = herm_exp(rho.mat, -T);  // exp(+i rho T)
  const CMat dn = herm_exp(rho.mat, T);   // exp(-i rho T)
  CMat u = CMat::Zero(2L * d, 2L * d);
  u.topLeftCorner(d, d) = up;
  u.bottomRightCorner(d, d) = dn;
  return unitary_channel(u);
}

SuperOp pswap_channel(const DensityMatrix& rho, double T, long N) {
  if (N < 1) throw std::invalid_argument("pswap_channel: N must be >= 1");
  const int d = rho.dim();
  const long d2 = static_cast<long>(d) * d;
  const double delta = T / static_cast<double>(N);
  const double c = std::cos(delta), s = std::sin(delta);
  const CMat id = CMat::Identity(d, d);
  // single step A -> c^2 A + s^2 tr[A] rho - i c s (rho A - A rho)
  CMat step = c * c * CMat::Identity(d2, d2);
  step += s * s * vec(rho.mat) * vec(id).transpose();
  const SuperOp lmult = asymmetric_map(rho.mat, id);  // A -> rho A
  const SuperOp rmult = asymmetric_map(id, rho.mat);  // A -> A rho
  step += Cx(0.0, -c * s) * (lmult.mat - rmult.mat);
  // N-fold composition by binary exponentiation
  CMat result = CMat::Identity(d2, d2);
  CMat base = step;
  long n = N;
  while (n > 0) {
    if (n & 1L) result = base * result;
    base = base * base;
    n >>= 1;
  }
  return SuperOp{result, d, d};
}

PswapCopyCount pswap_copy_count(const DensityMatrix& rho, double T,
                                double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("pswap_copy_count: eps must be positive");
  }
  PswapCopyCount out;
  out.analytic = std::max(
      1L, static_cast<long>(std::ceil(T * T / eps)));
  if (T == 0.0) {
    out.measured = 1;
    return out;
  }
  const SuperOp target = unitary_channel(herm_exp(rho.mat, T));
  auto err = [&](long n) {
    return diamond_bounds(pswap_channel(rho, T, n), target).second;
  };
  long hi = 1;
  constexpr long kCap = 1L << 46;
  while (err(hi) > eps) {
    hi *= 2;
    if (hi > kCap) {
      throw std::runtime_error("pswap_copy_count: eps unreachable");
    }
  }
  long lo = hi / 2;  // err(lo) > eps (or lo == 0)
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (err(mid) <= eps) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.measured = hi;
  return out;
}

}  // namespace vdme
