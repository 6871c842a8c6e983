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

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vdme/rng.hpp"

namespace vdme {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// dimension guard for tensor products; override with env VDME_MAX_DIM
int max_dim();

// validated quantum state: Hermitian (1e-12), unit trace (1e-12),
// eigenvalues >= -1e-10
struct DensityMatrix {
  CMat mat;
  int dim() const { return static_cast<int>(mat.rows()); }
};

// Hermitian observable
struct Observable {
  CMat mat;
  int dim() const { return static_cast<int>(mat.rows()); }
};

DensityMatrix make_density(const CMat& m);
Observable make_observable(const CMat& m);

bool is_hermitian(const CMat& m, double tol = 1e-12);
bool is_unitary(const CMat& m, double tol = 1e-10);

// Kronecker product a (x) b; guards total dimension against max_dim()
CMat tensor(const CMat& a, const CMat& b);

// trace out all factors except dims[keep]; `dims` are the tensor factor
// dimensions of m, ordered as in the product that built it
CMat partial_trace(const CMat& m, const std::vector<int>& dims, int keep);

// V f(Lambda) V^dag for Hermitian h
CMat herm_func(const CMat& h, const std::function<Cx(double)>& f);

// exp(-i t h) for Hermitian h
CMat herm_exp(const CMat& h, double t);

// swap operator on d (x) d: S (a (x) b) = b (x) a
CMat swap_operator(int d);

double op_norm(const CMat& m);     // largest singular value
double trace_norm(const CMat& m);  // sum of singular values

enum class StateKind { pure, mixed, spectrum };

// deterministic random states: pure = normalized complex Gaussian vector;
// mixed = Hilbert-Schmidt ensemble GG^dag/tr; spectrum = given eigenvalues
// in a Haar-random eigenbasis
DensityMatrix random_state(int d, StateKind kind, std::uint64_t seed,
                           const std::vector<double>& spectrum = {});

CVec random_pure_vector(int d, Rng& rng);
CMat random_unitary(int d, Rng& rng);
// random Hermitian, rescaled so op_norm == norm
CMat random_hermitian(int d, Rng& rng, double norm = 1.0);

// vec/unvec with column stacking: vec(A)_{j*d_r + i} = A_{ij}
CVec vec(const CMat& a);
CMat unvec(const CVec& v, int rows, int cols);

}  // namespace vdme
