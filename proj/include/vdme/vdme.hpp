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

#pragma once

#include "vdme/series.hpp"
#include "vdme/superop.hpp"

namespace vdme {

// one sampled run: r left and r right segment indices, each in 0..L
// (0/1 branch flags for the pure-state variant)
struct IndexSequence {
  std::vector<int> left;
  std::vector<int> right;
  double prob = 0.0;   // product of per-index probabilities
  long copies = 0;     // input copies consumed: 2r + 2 sum(l + l')
};

// one sampled virtual-evolution map. effective_map is the Hermiticity-
// preserving map measured by the ancilla X readout of the physical circuit:
//   A -> (B A C^dag + C A B^dag)/2
// with B, C the sampled left/right factor products. sign_weight is the
// constant rescaling norm_c^{2r} applied in post-processing.
struct DmeSample {
  IndexSequence seq;
  SuperOp effective_map;
  double sign_weight = 0.0;
};

IndexSequence sample_indices(const SeriesSpec& spec, Rng& rng);

// sampled left/right factor for segment index l:
//   (-i rho)^{2l} (cos(theta_l) I - i sgn(T) sin(theta_l) rho)
CMat general_segment_factor(const SeriesSpec& spec, const DensityMatrix& rho,
                            int l);

DmeSample sample_general(const SeriesSpec& spec, const DensityMatrix& rho,
                         Rng& rng);
DmeSample sample_general(const SeriesSpec& spec, const DensityMatrix& rho,
                         std::uint64_t seed);
DmeSample sample_from_indices(const SeriesSpec& spec, const DensityMatrix& rho,
                              const IndexSequence& seq);

struct ExactMean {
  SuperOp mean;           // E over samples of effective_map (not rescaled)
  bool enumerated = false;  // true if computed by exhaustive enumeration
};

// mean map; enumerates all (L+1)^{2r} index tuples when that count is within
// the guard, otherwise falls back to the closed-form product route
ExactMean exact_mean_general(const SeriesSpec& spec, const DensityMatrix& rho,
                             long enumeration_guard = 1000000);

// two-branch exact decomposition of exp(-i psi x), x = T/r, for a pure state
// psi:  exp(-i psi x) = norm_c [ p0 (cos(theta0) I - i sin(theta0) psi)
//                                + p1 e^{i phi} psi ]
// T is reduced modulo 2*pi into (-pi, pi] first (the target channel is
// 2*pi-periodic in T). phi_prime = phi + pi/2 is the ancilla phase applied
// when realizing the projector branch with a quarter-turn swap.
struct PureSpec {
  double T = 0.0;         // after reduction
  int r = 0;
  double x = 0.0;         // T/r
  double norm_c = 0.0;
  double p0 = 0.0, p1 = 0.0;
  double theta0 = 0.0;    // arctan(x), signed
  double phi = 0.0;
  double overhead = 0.0;  // norm_c^{2r}
};

// r = 0 picks the default 2 max(2, ceil(2 T^2)) (using the unreduced T)
PureSpec make_pure_spec(double T, int r = 0);

// branch factor W_0 = cos(theta0) I - i sin(theta0) psi, W_1 = e^{i phi} psi
CMat pure_branch_factor(const PureSpec& ps, const CMat& psi_proj, int branch);

DmeSample sample_pure(const PureSpec& ps, const CMat& psi_proj, Rng& rng);
// exact by construction: rescaling by overhead gives exactly
// U[exp(-i psi T)] up to roundoff
SuperOp exact_mean_pure(const PureSpec& ps, const CMat& psi_proj);

// controlled variant on a 2d register: block 0 evolves by exp(+i rho T),
// block 1 by exp(-i rho T); same index distribution and copy count as the
// general sampler
CMat controlled_segment_factor(const SeriesSpec& spec,
                               const DensityMatrix& rho, int l);
CMat controlled_series_matrix(const SeriesSpec& spec,
                              const DensityMatrix& rho);
DmeSample sample_controlled(const SeriesSpec& spec, const DensityMatrix& rho,
                            Rng& rng);
ExactMean exact_mean_controlled(const SeriesSpec& spec,
                                const DensityMatrix& rho,
                                long enumeration_guard = 1000000);
// U[ |0><0| x exp(+i rho T) + |1><1| x exp(-i rho T) ]
SuperOp controlled_target(const DensityMatrix& rho, double T);

// baseline protocol: N repetitions of the partial-swap channel
//   A -> tr_2[ exp(-i (T/N) S) (A x rho) exp(+i (T/N) S) ]
SuperOp pswap_channel(const DensityMatrix& rho, double T, long N);

struct PswapCopyCount {
  long measured = 0;   // smallest N with Choi-upper error <= eps
  long analytic = 0;   // ceil(T^2/eps) reference
};
PswapCopyCount pswap_copy_count(const DensityMatrix& rho, double T,
                                double eps);

}  // namespace vdme
