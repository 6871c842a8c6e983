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

#include <utility>

#include "vdme/linalg.hpp"

namespace vdme {

// Linear map on d_in x d_in operators, stored as a d_out^2 x d_in^2 matrix
// acting on column-stacked vec(A). Maps here are generally only
// Hermiticity-preserving (HP), not CPTP; flags are advisory and validated
// by the test suite, not enforced on construction.
struct SuperOp {
  CMat mat;    // d_out^2 x d_in^2
  int dim_in = 0;
  int dim_out = 0;

  CMat apply(const CMat& a) const;
};

SuperOp make_superop(const CMat& mat, int dim_in, int dim_out);
SuperOp identity_superop(int d);

// compose: (a after b)(x) = a(b(x)); dims must chain
SuperOp compose(const SuperOp& a, const SuperOp& b);
SuperOp add(const SuperOp& a, const SuperOp& b);
SuperOp subtract(const SuperOp& a, const SuperOp& b);
SuperOp scale(const SuperOp& a, Cx c);

// A -> U A U^dag (U unitary within tol)
SuperOp unitary_channel(const CMat& u, double tol = 1e-10);

// A -> L A R^dag (no unitarity requirement)
SuperOp asymmetric_map(const CMat& l, const CMat& r);

enum class Side { left, right };

// residual factor of k partial-swap interactions with traced-out copies of
// rho:  left:  A -> (cos(delta) I - i sin(delta) rho)^k A
//       right: A -> A (cos(delta) I + i sin(delta) rho)^k
SuperOp partial_swap_factor(double delta, int k, const DensityMatrix& rho,
                            Side side);

// A -> Phi(A) (x) id on an idle factor of dimension d_idle
SuperOp embed_left(const SuperOp& phi, int d_idle);

// A -> A (x) sigma (dimension-raising, CPTP)
SuperOp attach_state(const DensityMatrix& sigma, int d);

// partial trace as a superoperator (dimension-lowering, CPTP)
SuperOp ptrace_superop(const std::vector<int>& dims, int keep);

// Choi matrix J with J_{(i,k),(j,l)} = Phi(|i><j|)_{k,l}
// (input index i outer, output index k inner)
struct ChoiMatrix {
  CMat mat;
  int d = 0;
};

ChoiMatrix choi(const SuperOp& phi);

bool choi_hermitian(const ChoiMatrix& j, double tol = 1e-10);
// min eigenvalue of (J + J^dag)/2; >= -tol for CP maps
double choi_min_eigenvalue(const ChoiMatrix& j);
// partial trace of J over the output factor; == I for TP maps
CMat choi_reduction(const ChoiMatrix& j);

// trace-norm sandwich on the stabilized distance between two maps:
// ||J(a-b)||_1 / d  <=  D(a,b)  <=  ||J(a-b)||_1
std::pair<double, double> diamond_bounds(const SuperOp& a, const SuperOp& b);

// operator-norm distance of two matrices (used for comparing a map's
// defining matrix against a target unitary)
double unitary_error(const CMat& approx, const CMat& target);

// analytic bound on the stabilized distance between A . A^dag and U . U^dag
// for ||U|| = 1: ||A - U|| * (1 + ||A||)
double conjugation_error_bound(const CMat& a, const CMat& u);

}  // namespace vdme
