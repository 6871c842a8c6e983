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

#include "vdme/vdme.hpp"

namespace vdme {

// CPTP channel on (ancilla qubit) x (system); realizes a Hermiticity-
// preserving map as the ancilla X readout of a physical circuit
struct DilatedChannel {
  SuperOp base;  // 2*d_in -> 2*d_out
  int d_in = 0;
  int d_out = 0;
};

// CPTP step applied identically on both ancilla branches: id_2 (x) phi
DilatedChannel dilate_cptp(const SuperOp& phi);

// convex combination of asymmetric unitary pairs sum_i q_i U_i . V_i^dag,
// dilated exactly as sum_i q_i U[|0><0| x U_i + |1><1| x V_i];
// term count limited by `guard`
struct AsymTerm {
  double q = 0.0;
  CMat u;
  CMat v;
};
DilatedChannel dilate_convex(const std::vector<AsymTerm>& terms,
                             long guard = 10000);

DilatedChannel compose_dilated(const DilatedChannel& a,
                               const DilatedChannel& b);
DilatedChannel identity_dilated(int d);

// tr_anc[ (X (x) I) dc(|+><+| (x) A) ]
CMat x_readout(const DilatedChannel& dc, const CMat& a);

// one elementary dilated step: attach a copy of rho, apply the partial swap
// exp(-i delta S) on the active ancilla branch (left: branch 0, right:
// branch 1), trace the copy. With controlled=true the system carries a
// leading control qubit and the swap angle sign follows it (-delta on
// control 0, +delta on control 1).
DilatedChannel dilated_swap_step(const DensityMatrix& rho, double delta,
                                 Side side, bool controlled = false);

// ancilla phase gate diag(e^{i phi}) on branch `active` (unitary, CPTP)
DilatedChannel dilated_phase(int d, double phi, int active);

// full dilated circuit of one sampled run of the general (or controlled)
// sampler; its x_readout equals the sample's effective_map
DilatedChannel dilated_general_chain(const SeriesSpec& spec,
                                     const DensityMatrix& rho,
                                     const IndexSequence& seq);
DilatedChannel dilated_controlled_chain(const SeriesSpec& spec,
                                        const DensityMatrix& rho,
                                        const IndexSequence& seq);
DilatedChannel dilated_pure_chain(const PureSpec& ps, const CMat& psi_proj,
                                  const IndexSequence& seq);

// --- matrix-free state propagation (same maps, applied to one state) ---

// applies one elementary dilated step in place to a (2D)x(2D) state whose
// system layout is [control (x)] rho-system (x) idle; rho has the swap-
// coupled factor's dimension and d_idle the trailing idle dimension
void step_dilated_state(CMat& tau, const CMat& rho, int d_idle, double delta,
                        Side side, bool controlled = false);

// ancilla phase gate on branch `active`
void phase_dilated_state(CMat& tau, double phi, int active);

// tr_anc[(X (x) I) tau] for a (2D)x(2D) state
CMat x_readout_state(const CMat& tau);

}  // namespace vdme
