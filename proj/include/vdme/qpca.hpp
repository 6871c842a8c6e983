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

#include <string>

#include "vdme/estimator.hpp"

namespace vdme {

// dominant-eigenvector extraction setup: rho = (1-lambda) psi psi^dag +
// lambda rho_err with rho_err supported on the orthogonal complement of psi;
// eta is a known upper bound on lambda
struct NoiseModel {
  int d = 0;
  double lambda = 0.0;
  double eta = 0.0;
  CVec psi;
  CMat psi_proj;
  CMat rho_err;
  DensityMatrix rho;
  std::vector<double> err_spectrum;  // eigenvalues of rho_err, size d - 1
};

// err_spectrum empty -> rho_err is a random pure state in the complement;
// otherwise the given spectrum (nonnegative, summing to 1, at most d - 1
// entries) over a random orthonormal complement basis
NoiseModel make_noise_model(int d, double lambda, double eta,
                            std::uint64_t seed,
                            const std::vector<double>& err_spectrum = {});

// cosine-series spectral filter F(x) = sum_k f(k) cos(kx) designed so that
// |F - 1| <= eps1 on [0, eta] and |F| <= eps2 on [1 - eta, 1]
struct FilterSpec {
  int order = 0;               // highest cosine index
  std::vector<double> coeff;   // f(0..order)
  double eta = 0.0;
  double eps1 = 0.0;           // design targets
  double eps2 = 0.0;
  double dev_low = 0.0;        // verified max |F - 1| on [0, eta]
  double dev_high = 0.0;       // verified max |F| on [1 - eta, 1]
};

struct InfeasibleDesign : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

double filter_value(const FilterSpec& fs, double x);
// F applied to a Hermitian matrix by eigenvalue substitution
CMat filter_matrix(const FilterSpec& fs, const CMat& h);
// (max |F - 1| on [0, eta], max |F| on [1 - eta, 1]) over `points` samples
// per band
std::pair<double, double> filter_band_deviation(const FilterSpec& fs,
                                                int points = 10000);
// minimal-order design by increasing the order until the weighted discrete
// minimax problem on both bands is feasible; throws InfeasibleDesign past
// max_order
FilterSpec design_filter(double eta, double eps1, double eps2,
                         int max_order = 200);

struct CoherentMetrics {
  double delta_bound = 0.0;  // 2 ||O|| eta/(1-eta) (eps2/(1-eps1))^2
  double gamma2 = 0.0;       // e ||O||^2 / tr[F^2(1-rho) rho]^2
  double copies = 0.0;       // 1 + 8 order^2
};
CoherentMetrics coherent_metrics(const FilterSpec& fs, const NoiseModel& nm,
                                 double onorm = 1.0);

struct HybridMetrics {
  double delta_bound = 0.0;  // 2 ||O|| eps2 eta / ((1-eta)(1-eps1) - eps2 eta)
  double gamma2 = 0.0;       // sum f^2 sigma^2/lambda / tr[F(1-rho) rho]^2
  double copies = 0.0;       // sum lambda_k (1 + 2 k^2)
  std::vector<double> lambda;  // optimal index distribution
  std::vector<double> sigma;   // per-term std bounds
};
HybridMetrics hybrid_metrics(const FilterSpec& fs, const NoiseModel& nm,
                             double onorm = 1.0);

// expectation of the filtered state, evaluated at the effective-operator
// level. delta_prime = 0 uses exact matrix functions (truth mode); otherwise
// every exp(-+i rho/2) factor is replaced by its grouped-series approximant
// at per-slot accuracy W0(delta_prime/||O||)/(2 order)
struct RatioEstimate {
  double numerator = 0.0;    // tr[O F rho F]
  double denominator = 0.0;  // tr[F rho F]
  double ratio = 0.0;
};
RatioEstimate run_coherent_effective(const FilterSpec& fs,
                                     const NoiseModel& nm,
                                     const Observable& obs,
                                     double delta_prime);

// Monte Carlo run of the classically mixed filter: per shot draw k, run the
// controlled virtual evolution with T = k/2, r = k^2 inside a Hadamard test,
// weight by norm_c^{2k^2} f(k)/lambda_k. The denominator stream repeats the
// protocol with the identity observable; ratio = numerator/denominator.
struct HybridRun {
  EstimatorReport numerator;
  EstimatorReport denominator;
  double ratio = 0.0;
};
HybridRun run_hybrid_circuit(const FilterSpec& fs, const NoiseModel& nm,
                             const Observable& obs, long shots,
                             double delta_prime, std::uint64_t seed,
                             int workers = 1);

// distillation baseline estimating tr[O rho^l]/tr[rho^l]
struct VdMetrics {
  double delta = 0.0;     // 2 Q_l/(1 + Q_l), Q_l = (lambda/(1-lambda))^l
                          // tr[rho_err^l]
  double overhead = 0.0;  // tr[rho^l]^{-2}
};
VdMetrics vd_metrics(const NoiseModel& nm, int l);
// smallest l with delta(l) <= delta
int vd_design(const NoiseModel& nm, double delta, int max_l = 500);

// phase-estimation baseline with the sine-window ancilla register on m
// qubits and post-selection on the dominant bin
struct OriginalMetrics {
  int m = 0;
  double delta_achieved = 0.0;
  double copies = 0.0;    // 4 pi^2 (2^m - 1)^2 / ((1 - lambda) delta_target)
  double overhead = 0.0;  // inverse post-selection probability
};
OriginalMetrics qpca_original_metrics(const NoiseModel& nm, int m,
                                      double delta_target);
// smallest m with achieved error <= delta_target
OriginalMetrics qpca_original_design(const NoiseModel& nm,
                                     double delta_target, int max_m = 20);

// one sweep row per (accuracy target, method); percentile columns carry the
// copy-count distribution for the hybrid method and degenerate to `copies`
// for the deterministic methods
struct SweepRow {
  double delta = 0.0;
  std::string method;  // coherent | hybrid | vd | original
  double copies = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  double overhead = 0.0;
};
std::vector<SweepRow> compare_sweep(const NoiseModel& nm,
                                    const std::vector<double>& deltas,
                                    double onorm = 1.0, int workers = 1);

}  // namespace vdme
