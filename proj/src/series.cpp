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

#include "vdme/series.hpp"

#include <cmath>
#include <stdexcept>

namespace vdme {

double lambert_w0(double c) {
  constexpr double kInvE = 0.36787944117144232159552377016146;
  if (!(c >= -kInvE)) {
    throw std::invalid_argument("lambert_w0: argument below -1/e");
  }
  if (c == 0.0) return 0.0;
  // seed: asymptotic ln(c) - ln(ln(c)) for large c, else a crude rational
  double w;
  if (c > std::exp(1.0)) {
    const double l = std::log(c);
    w = l - std::log(l);
  } else if (c > 0.0) {
    w = c / (1.0 + c);
  } else {
    // c in [-1/e, 0): series seed around the branch point
    const double p = std::sqrt(2.0 * (std::exp(1.0) * c + 1.0));
    w = -1.0 + p - p * p / 3.0;
  }
  // Halley iteration
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double fw = w * ew - c;
    const double denom = ew * (w + 1.0) - (w + 2.0) * fw / (2.0 * w + 2.0);
    const double step = fw / denom;
    w -= step;
    if (std::abs(fw) <= 1e-13 * (1.0 + std::abs(c)) &&
        std::abs(step) <= 1e-13 * (1.0 + std::abs(w))) {
      break;
    }
  }
  if (std::abs(w * std::exp(w) - c) > 1e-12 * (1.0 + std::abs(c))) {
    throw std::runtime_error("lambert_w0: iteration did not converge");
  }
  return std::max(w, -1.0);
}

static void check_order_inputs(int r, double eps) {
  if (r < 1) throw std::invalid_argument("truncation order: r must be >= 1");
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("truncation order: eps must be in (0, 1/2)");
  }
}

// verify 1/(2L+1)! <= target in log space
static bool remainder_ok(int L, double log_target) {
  return -std::lgamma(2.0 * L + 2.0) <= log_target;
}

int choose_truncation_order(int r, double eps, double band_factor) {
  check_order_inputs(r, eps);
  const double w = std::log(band_factor * r / eps);
  const double y = w / lambert_w0(w / std::exp(1.0));  // solves y ln(y/e) = w
  int L = static_cast<int>(std::ceil(0.5 * y - 0.5));
  L = std::max(L, 1);
  // guard against roundoff at the ceiling edge
  const double log_target = std::log(eps) - std::log(band_factor * r);
  while (!remainder_ok(L, log_target)) ++L;
  return L;
}

int choose_truncation_order_simple(int r, double eps, double band_factor) {
  check_order_inputs(r, eps);
  const double w = std::log(band_factor * r / eps);
  if (w <= 1.0) return 1;
  int L = static_cast<int>(std::ceil(w / std::log(w) - 0.5));
  L = std::max(L, 1);
  const double log_target = std::log(eps) - std::log(band_factor * r);
  while (!remainder_ok(L, log_target)) ++L;
  return L;
}

SeriesSpec build_series_fixed_order(double T, int r, int L) {
  if (T == 0.0) throw std::invalid_argument("build_series: T must be nonzero");
  if (r < 1 || static_cast<double>(r) < std::abs(T)) {
    throw std::invalid_argument("build_series: need r >= max(1, |T|)");
  }
  if (L < 0) throw std::invalid_argument("build_series: L must be >= 0");
  SeriesSpec spec;
  spec.T = T;
  spec.r = r;
  spec.L = L;
  const double x = std::abs(T) / r;
  spec.coeff.resize(L + 1);
  spec.theta.resize(L + 1);
  spec.prob.resize(L + 1);
  double c_sum = 0.0;
  for (int l = 0; l <= L; ++l) {
    const double ratio = x / (2.0 * l + 1.0);
    const double log_c = 2.0 * l * std::log(x) - std::lgamma(2.0 * l + 1.0) +
                         0.5 * std::log1p(ratio * ratio);
    spec.coeff[l] = std::exp(log_c);
    spec.theta[l] = std::atan(ratio);
    c_sum += spec.coeff[l];
  }
  spec.norm_c = c_sum;
  for (int l = 0; l <= L; ++l) spec.prob[l] = spec.coeff[l] / c_sum;
  spec.overhead = std::exp(2.0 * r * std::log(c_sum));
  return spec;
}

SeriesSpec build_series(double T, int r, double eps) {
  return build_series_fixed_order(T, r, choose_truncation_order(r, eps));
}

CMat truncated_series_matrix(const SeriesSpec& spec, const DensityMatrix& rho) {
  const int d = rho.dim();
  const CMat id = CMat::Identity(d, d);
  const double sgn = (spec.T >= 0.0) ? 1.0 : -1.0;
  CMat s = CMat::Zero(d, d);
  CMat rho_even = id;  // rho^{2l}
  const CMat rho_sq = rho.mat * rho.mat;
  for (int l = 0; l <= spec.L; ++l) {
    const double parity = (l % 2 == 0) ? 1.0 : -1.0;  // (-i)^{2l}
    s += spec.coeff[l] * parity *
         (rho_even * (std::cos(spec.theta[l]) * id -
                      Cx(0.0, sgn * std::sin(spec.theta[l])) * rho.mat));
    if (l < spec.L) rho_even = rho_even * rho_sq;
  }
  return s;
}

long copy_count_bound(const SeriesSpec& spec) {
  return 2L * spec.r + 4L * spec.r * spec.L;
}

double mean_copy_count(const SeriesSpec& spec) {
  double mean_l = 0.0;
  for (int l = 0; l <= spec.L; ++l) mean_l += l * spec.prob[l];
  return 2.0 * spec.r * (1.0 + 2.0 * mean_l);
}

int default_general_segments(double T) {
  return std::max(1, static_cast<int>(std::ceil(2.0 * T * T)));
}

int default_pure_segments(double T) {
  return 2 * std::max(2, static_cast<int>(std::ceil(2.0 * T * T)));
}

}  // namespace vdme
