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

#include <cstdint>

#include "vdme/lcs.hpp"

namespace vdme {

// one virtual-evolution slot inside a layered circuit. The slot acts on the
// leading tensor factor of the register: `general` and `pure` couple a
// rho-dimensional factor, `controlled` a (2 x rho)-dimensional one (control
// qubit first). eps is the per-slot series accuracy target; r = 0 picks the
// kind's default segment count.
enum class SlotKind { general, pure, controlled };

struct SlotSpec {
  SlotKind kind = SlotKind::general;
  double T = 0.0;
  DensityMatrix rho;
  double eps = 1e-3;
  int r = 0;
};

// interleaved circuit V_M U_M ... V_1 U_1 V_0 acting on sigma, followed by
// measurement of obs; U_m is the virtual evolution of slot m
struct CircuitPlan {
  int dim = 0;
  DensityMatrix sigma;
  Observable obs;
  std::vector<CMat> interleavers;  // size slots + 1
  std::vector<SlotSpec> slots;
};

CircuitPlan make_circuit_plan(const DensityMatrix& sigma, const Observable& obs,
                              const std::vector<CMat>& interleavers,
                              const std::vector<SlotSpec>& slots);

// uniform per-slot segment count max(1, ceil(2 M / ln gamma)); keeps the
// total rescaling overhead below gamma whenever every |T_m| <= 1
long plan_segments(double gamma, int m_slots);
void choose_segments(CircuitPlan& plan, double gamma);

struct ExactEstimate {
  double value = 0.0;          // expectation of the rescaled estimator
  double ideal = 0.0;          // same circuit with exact target unitaries
  double overhead = 0.0;       // product of slot rescalings norm_c^{2r}
  double bias_bound = 0.0;
  double choi_upper_max = 0.0;
  std::vector<double> slot_choi_upper;
};

ExactEstimate estimate_exact(const CircuitPlan& plan);

// |value - ideal| <= ||obs|| M delta e^{M delta}, delta the largest per-slot
// diamond-norm upper bound of (rescaled mean - target)
double bias_bound(const CircuitPlan& plan);

struct EstimatorReport {
  double mean = 0.0;
  double std_error = 0.0;
  double overhead = 0.0;
  double variance_amplification = 0.0;  // overhead^2
  double bias_bound = 0.0;
  long samples = 0;
  long copies_min = 0;
  long copies_max = 0;
  double copies_mean = 0.0;
};

// Monte Carlo run of the physical protocol: per shot, sampled dilated
// circuits with ancilla X collapse after each slot and a final eigenvalue
// draw of obs. Deterministic for fixed seed, bit-identical for any worker
// count (fixed chunking, per-shot counter streams, fixed-order reduction).
EstimatorReport estimate_shots(const CircuitPlan& plan, long shots,
                               std::uint64_t seed, int workers = 1);

}  // namespace vdme
