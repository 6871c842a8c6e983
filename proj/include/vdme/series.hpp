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

#include <vector>

#include "vdme/linalg.hpp"

namespace vdme {

// principal Lambert branch: w with w * exp(w) = c, w >= -1, for c >= -1/e
double lambert_w0(double c);

// smallest truncation order L (by the closed-form Lambert expression) such
// that the factorial remainder bound 1/(2L+1)! <= eps/(band_factor*r) holds.
// band_factor=3 matches the per-segment budget used by the samplers; the
// looser band_factor=1 variant is kept for reference.
int choose_truncation_order(int r, double eps, double band_factor = 3.0);

// simplified closed form ceil(w/ln(w) - 1/2), w = ln(band_factor*r/eps);
// slightly larger than choose_truncation_order but simpler to audit
int choose_truncation_order_simple(int r, double eps,
                                   double band_factor = 3.0);

// Grouped odd/even pairing of the Taylor series of exp(-i rho T/r) truncated
// at polynomial degree 2L+1:
//   sum_{l=0}^{L} coeff[l] * (-i rho)^{2l} (cos(theta[l]) I
//                                           - i sgn(T) sin(theta[l]) rho)
// with coeff[l] = x^{2l}/(2l)! * sqrt(1+(x/(2l+1))^2), x = |T|/r,
// theta[l] = arctan(x/(2l+1)). prob[l] = coeff[l]/norm_c is the sampling
// distribution; overhead = norm_c^{2r} is the estimator rescaling.
struct SeriesSpec {
  double T = 0.0;
  int r = 0;
  int L = 0;
  std::vector<double> coeff;
  std::vector<double> theta;
  std::vector<double> prob;
  double norm_c = 0.0;
  double overhead = 0.0;
};

// requires T != 0, r >= max(1, |T|), eps in (0, 1/2)
SeriesSpec build_series(double T, int r, double eps);

// same, with the truncation order pinned explicitly
SeriesSpec build_series_fixed_order(double T, int r, int L);

// the truncated series matrix S_L(T/r) for the given state
CMat truncated_series_matrix(const SeriesSpec& spec, const DensityMatrix& rho);

// worst-case copies consumed by one sampled protocol run: 2r + 4rL
long copy_count_bound(const SeriesSpec& spec);

// expected copies per sampled run: 2r (1 + 2 E[l])
double mean_copy_count(const SeriesSpec& spec);

// default segment counts keeping the overhead at most e
int default_general_segments(double T);  // max(1, ceil(2 T^2))
int default_pure_segments(double T);     // 2 max(2, ceil(2 T^2))

}  // namespace vdme
