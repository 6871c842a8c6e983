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

#include "vdme/qpca.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>

#include "vdme/series.hpp"

namespace vdme {

NoiseModel make_noise_model(int d, double lambda, double eta,
                            std::uint64_t seed,
                            const std::vector<double>& err_spectrum) {
  if (d < 2) throw std::invalid_argument("noise model: d must be >= 2");
  if (lambda < 0.0 || lambda >= 0.5)
    throw std::invalid_argument("noise model: lambda must be in [0, 1/2)");
  if (eta < lambda || eta >= 0.5)
    throw std::invalid_argument("noise model: eta must be in [lambda, 1/2)");
  NoiseModel nm;
  nm.d = d;
  nm.lambda = lambda;
  nm.eta = eta;
  Rng rng(seed, 0);
  nm.psi = random_pure_vector(d, rng);
  nm.psi_proj = nm.psi * nm.psi.adjoint();
  // orthonormal basis of the complement of psi
  CMat q(d, d - 1);
  int cols = 0;
  for (int i = 0; i < d && cols < d - 1; ++i) {
    CVec v = CVec::Zero(d);
    v(i) = 1.0;
    v -= nm.psi * (nm.psi.dot(v));
    for (int j = 0; j < cols; ++j) {
      const CVec qj = q.col(j);
      v -= qj * (qj.dot(v));
    }
    const double n = v.norm();
    if (n > 1e-8) {
      q.col(cols) = v / n;
      ++cols;
    }
  }
  if (cols != d - 1)
    throw std::runtime_error("noise model: complement basis construction");
  nm.err_spectrum.assign(d - 1, 0.0);
  if (err_spectrum.empty()) {
    const CVec w = q * random_pure_vector(d - 1, rng);
    nm.rho_err = w * w.adjoint();
    nm.err_spectrum[0] = 1.0;
  } else {
    if (static_cast<int>(err_spectrum.size()) > d - 1)
      throw std::invalid_argument("noise model: spectrum longer than d - 1");
    double total = 0.0;
    for (double p : err_spectrum) {
      if (p < -1e-12)
        throw std::invalid_argument("noise model: negative spectrum entry");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9)
      throw std::invalid_argument("noise model: spectrum must sum to 1");
    std::copy(err_spectrum.begin(), err_spectrum.end(),
              nm.err_spectrum.begin());
    std::sort(nm.err_spectrum.begin(), nm.err_spectrum.end(),
              std::greater<double>());
    const CMat basis = q * random_unitary(d - 1, rng);
    nm.rho_err = CMat::Zero(d, d);
    for (int k = 0; k < d - 1; ++k)
      nm.rho_err +=
          nm.err_spectrum[k] * (basis.col(k) * basis.col(k).adjoint());
  }
  nm.rho = make_density((1.0 - lambda) * nm.psi_proj + lambda * nm.rho_err);
  return nm;
}

double filter_value(const FilterSpec& fs, double x) {
  double v = 0.0;
  for (std::size_t k = 0; k < fs.coeff.size(); ++k)
    v += fs.coeff[k] * std::cos(static_cast<double>(k) * x);
  return v;
}

CMat filter_matrix(const FilterSpec& fs, const CMat& h) {
  return herm_func(h, [&](double x) { return Cx(filter_value(fs, x), 0.0); });
}

std::pair<double, double> filter_band_deviation(const FilterSpec& fs,
                                                int points) {
  if (points < 2) throw std::invalid_argument("band deviation: points < 2");
  double dev1 = 0.0, dev2 = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    const double x1 = fs.eta * t;
    const double x2 = (1.0 - fs.eta) + fs.eta * t;
    dev1 = std::max(dev1, std::abs(filter_value(fs, x1) - 1.0));
    dev2 = std::max(dev2, std::abs(filter_value(fs, x2)));
  }
  return {dev1, dev2};
}

namespace {

// iteratively reweighted least squares for the two-band weighted minimax
// problem; returns true as soon as an iterate meets both band targets on the
// design grid and the independent verification grid
bool lawson_feasible(double eta, double eps1, double eps2, int order,
                     std::vector<double>* coeff_out, double* dev1_out,
                     double* dev2_out) {
  const int per_band = std::max(48, 4 * (order + 1));
  const int n = 2 * per_band;
  std::vector<double> xs(n), goal(n), scale(n);
  for (int i = 0; i < per_band; ++i) {
    const double c = 0.5 * (1.0 + std::cos(kPi * i / (per_band - 1)));
    xs[i] = eta * c;
    goal[i] = 1.0;
    scale[i] = eps1;
    xs[per_band + i] = (1.0 - eta) + eta * c;
    goal[per_band + i] = 0.0;
    scale[per_band + i] = eps2;
  }
  Eigen::MatrixXd basis(n, order + 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= order; ++j) basis(i, j) = std::cos(j * xs[i]);
  std::vector<double> w(n, 1.0 / n);
  Eigen::MatrixXd a(n, order + 1);
  Eigen::VectorXd b(n);
  FilterSpec probe;
  probe.order = order;
  probe.eta = eta;
  const int max_iter = 160;
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i < n; ++i) {
      const double sw = std::sqrt(w[i]) / scale[i];
      for (int j = 0; j <= order; ++j) a(i, j) = sw * basis(i, j);
      b(i) = sw * goal[i];
    }
    const Eigen::VectorXd f = a.colPivHouseholderQr().solve(b);
    double dev = 0.0;
    std::vector<double> resid(n);
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int j = 0; j <= order; ++j) v += f(j) * basis(i, j);
      resid[i] = std::abs(v - goal[i]) / scale[i];
      dev = std::max(dev, resid[i]);
    }
    if (dev <= 1.0 - 1e-9) {
      probe.coeff.assign(f.data(), f.data() + order + 1);
      const auto devs = filter_band_deviation(probe, 10000);
      if (devs.first <= eps1 && devs.second <= eps2) {
        *coeff_out = probe.coeff;
        *dev1_out = devs.first;
        *dev2_out = devs.second;
        return true;
      }
    }
    double wsum = 0.0;
    for (int i = 0; i < n; ++i) {
      w[i] = std::max(w[i] * resid[i], 1e-300);
      wsum += w[i];
    }
    for (int i = 0; i < n; ++i) w[i] /= wsum;
  }
  return false;
}

FilterSpec design_filter_impl(double eta, double eps1, double eps2,
                              int min_order, int max_order) {
  if (eta <= 0.0 || eta >= 0.5)
    throw std::invalid_argument("design_filter: eta must be in (0, 1/2)");
  if (eps1 <= 0.0 || eps1 >= 1.0 || eps2 <= 0.0 || eps2 >= 1.0)
    throw std::invalid_argument("design_filter: eps out of (0, 1)");
  for (int order = std::max(0, min_order); order <= max_order; ++order) {
    std::vector<double> coeff;
    double dev1 = 0.0, dev2 = 0.0;
    if (lawson_feasible(eta, eps1, eps2, order, &coeff, &dev1, &dev2)) {
      FilterSpec fs;
      fs.order = order;
      fs.coeff = coeff;
      fs.eta = eta;
      fs.eps1 = eps1;
      fs.eps2 = eps2;
      fs.dev_low = dev1;
      fs.dev_high = dev2;
      return fs;
    }
  }
  throw InfeasibleDesign("design_filter: no feasible order within cap");
}

}  // namespace

FilterSpec design_filter(double eta, double eps1, double eps2, int max_order) {
  return design_filter_impl(eta, eps1, eps2, 0, max_order);
}

CoherentMetrics coherent_metrics(const FilterSpec& fs, const NoiseModel& nm,
                                 double onorm) {
  if (fs.eta < nm.lambda - 1e-12)
    throw std::invalid_argument("coherent_metrics: filter band below lambda");
  CoherentMetrics cm;
  const double rr = fs.eps2 / (1.0 - fs.eps1);
  cm.delta_bound = 2.0 * onorm * fs.eta / (1.0 - fs.eta) * rr * rr;
  const CMat h = CMat::Identity(nm.d, nm.d) - nm.rho.mat;
  const CMat f = filter_matrix(fs, h);
  const double t2 = std::real((f * f * nm.rho.mat).trace());
  cm.gamma2 = std::exp(1.0) * onorm * onorm / (t2 * t2);
  cm.copies = 1.0 + 8.0 * static_cast<double>(fs.order) * fs.order;
  return cm;
}

HybridMetrics hybrid_metrics(const FilterSpec& fs, const NoiseModel& nm,
                             double onorm) {
  if (fs.eta < nm.lambda - 1e-12)
    throw std::invalid_argument("hybrid_metrics: filter band below lambda");
  const double denom_ok = (1.0 - fs.eta) * (1.0 - fs.eps1) - fs.eps2 * fs.eta;
  if (denom_ok <= 0.0)
    throw std::invalid_argument("hybrid_metrics: validity condition fails");
  HybridMetrics hm;
  hm.delta_bound = 2.0 * onorm * fs.eps2 * fs.eta / denom_ok;
  const int m = fs.order;
  hm.sigma.assign(m + 1, std::sqrt(std::exp(1.0)) * onorm);
  hm.sigma[0] = onorm;
  hm.lambda.assign(m + 1, 0.0);
  double lsum = 0.0;
  for (int k = 0; k <= m; ++k) {
    hm.lambda[k] = std::abs(fs.coeff[k]) * hm.sigma[k] /
                   std::sqrt(1.0 + 2.0 * static_cast<double>(k) * k);
    lsum += hm.lambda[k];
  }
  if (lsum <= 0.0)
    throw std::invalid_argument("hybrid_metrics: all coefficients vanish");
  double var_bound = 0.0;
  hm.copies = 0.0;
  for (int k = 0; k <= m; ++k) {
    hm.lambda[k] /= lsum;
    const double ck = 1.0 + 2.0 * static_cast<double>(k) * k;
    hm.copies += hm.lambda[k] * ck;
    if (hm.lambda[k] > 0.0)
      var_bound +=
          fs.coeff[k] * fs.coeff[k] * hm.sigma[k] * hm.sigma[k] / hm.lambda[k];
  }
  const CMat h = CMat::Identity(nm.d, nm.d) - nm.rho.mat;
  const CMat f = filter_matrix(fs, h);
  const double t1 = std::real((f * nm.rho.mat).trace());
  hm.gamma2 = var_bound / (t1 * t1);
  return hm;
}

RatioEstimate run_coherent_effective(const FilterSpec& fs,
                                     const NoiseModel& nm,
                                     const Observable& obs,
                                     double delta_prime) {
  if (delta_prime < 0.0)
    throw std::invalid_argument("run_coherent_effective: delta_prime < 0");
  const int d = nm.d;
  CMat f_eff;
  if (delta_prime == 0.0 || fs.order == 0) {
    f_eff = filter_matrix(fs, CMat::Identity(d, d) - nm.rho.mat);
  } else {
    const double onorm = op_norm(obs.mat);
    double eps = lambert_w0(delta_prime / onorm) / (2.0 * fs.order);
    eps = std::min(eps, 0.4);
    const int r = 2 * fs.order;
    const DensityMatrix& rho = nm.rho;
    // half-angle factors; powers give exp(+-ik rho)
    const SeriesSpec sp = build_series(-0.5, r, eps);
    const SeriesSpec sm = build_series(0.5, r, eps);
    CMat up = CMat::Identity(d, d);   // ~ exp(+i rho/2)^r per slot
    CMat um = CMat::Identity(d, d);
    const CMat segp = truncated_series_matrix(sp, rho);
    const CMat segm = truncated_series_matrix(sm, rho);
    for (int j = 0; j < r; ++j) {
      up = segp * up;
      um = segm * um;
    }
    const CMat up2 = up * up;  // ~ exp(+i rho)
    const CMat um2 = um * um;
    f_eff = fs.coeff[0] * CMat::Identity(d, d);
    CMat pp = CMat::Identity(d, d);
    CMat pm = CMat::Identity(d, d);
    for (int k = 1; k <= fs.order; ++k) {
      pp = pp * up2;
      pm = pm * um2;
      const Cx wp = std::exp(Cx(0.0, -static_cast<double>(k)));
      f_eff += 0.5 * fs.coeff[k] * (wp * pp + std::conj(wp) * pm);
    }
  }
  RatioEstimate re;
  const CMat filtered = f_eff * nm.rho.mat * f_eff.adjoint();
  re.numerator = std::real((obs.mat * filtered).trace());
  re.denominator = std::real(filtered.trace());
  re.ratio = re.numerator / re.denominator;
  return re;
}

namespace {

struct HybridContext {
  const NoiseModel* nm = nullptr;
  const FilterSpec* fs = nullptr;
  std::vector<double> lambda;
  std::vector<SeriesSpec> specs;  // per k, unused at k = 0
  CMat obs_vecs;
  Eigen::VectorXd obs_vals;
  std::vector<double> rho_probs;  // obs eigenbasis probabilities under rho
  bool identity_obs = false;
};

void hybrid_shot(const HybridContext& ctx, std::uint64_t seed,
                 long shot_index, double* value_out, long* copies_out) {
  const NoiseModel& nm = *ctx.nm;
  const FilterSpec& fs = *ctx.fs;
  const int d = nm.d;
  Rng rng(seed, static_cast<std::uint64_t>(shot_index));
  const int k = rng.categorical(ctx.lambda);
  if (k == 0) {
    double g = 1.0;
    if (!ctx.identity_obs)
      g = ctx.obs_vals(rng.categorical(ctx.rho_probs));
    *value_out = fs.coeff[0] / ctx.lambda[0] * g;
    *copies_out = 1;
    return;
  }
  const SeriesSpec& sp = ctx.specs[static_cast<std::size_t>(k)];
  const int big = 2 * d;  // control (x) system
  CMat tau(2 * big, 2 * big);
  {
    // |+><+|_readout (x) |+><+|_control (x) rho
    CMat inner(big, big);
    inner.topLeftCorner(d, d) = 0.5 * nm.rho.mat;
    inner.topRightCorner(d, d) = 0.5 * nm.rho.mat;
    inner.bottomLeftCorner(d, d) = 0.5 * nm.rho.mat;
    inner.bottomRightCorner(d, d) = 0.5 * nm.rho.mat;
    tau.topLeftCorner(big, big) = 0.5 * inner;
    tau.topRightCorner(big, big) = 0.5 * inner;
    tau.bottomLeftCorner(big, big) = 0.5 * inner;
    tau.bottomRightCorner(big, big) = 0.5 * inner;
  }
  long copies = 1;
  for (int j = 0; j < sp.r; ++j) {
    const int l = rng.categorical(sp.prob);
    const int lp = rng.categorical(sp.prob);
    step_dilated_state(tau, nm.rho.mat, 1, sp.theta[lp], Side::right, true);
    for (int q = 0; q < 2 * lp; ++q)
      step_dilated_state(tau, nm.rho.mat, 1, 0.5 * kPi, Side::right, true);
    step_dilated_state(tau, nm.rho.mat, 1, sp.theta[l], Side::left, true);
    for (int q = 0; q < 2 * l; ++q)
      step_dilated_state(tau, nm.rho.mat, 1, 0.5 * kPi, Side::left, true);
    copies += 2 + 2L * (l + lp);
  }
  // control-phase exp(-i k Z/2): off-diagonal control blocks pick up e^{-+ik}
  const Cx ph = std::exp(Cx(0.0, -static_cast<double>(k)));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      tau.block(a * big, b * big + d, d, d) *= ph;
      tau.block(a * big + d, b * big, d, d) *= std::conj(ph);
    }
  // readout-ancilla X collapse
  const CMat diag_sum =
      tau.topLeftCorner(big, big) + tau.bottomRightCorner(big, big);
  const CMat off_sum =
      tau.topRightCorner(big, big) + tau.bottomLeftCorner(big, big);
  const CMat plus1 = 0.5 * (diag_sum + off_sum);
  const CMat minus1 = 0.5 * (diag_sum - off_sum);
  const double pp1 = std::max(0.0, std::real(plus1.trace()));
  const double pm1 = std::max(0.0, std::real(minus1.trace()));
  double s = 1.0;
  CMat sigma;
  if (rng.uniform() * (pp1 + pm1) < pp1) {
    sigma = plus1 / pp1;
  } else {
    sigma = minus1 / pm1;
    s = -s;
  }
  // control-qubit X collapse
  const CMat d2 = sigma.topLeftCorner(d, d) + sigma.bottomRightCorner(d, d);
  const CMat o2 = sigma.topRightCorner(d, d) + sigma.bottomLeftCorner(d, d);
  const CMat plus2 = 0.5 * (d2 + o2);
  const CMat minus2 = 0.5 * (d2 - o2);
  const double pp2 = std::max(0.0, std::real(plus2.trace()));
  const double pm2 = std::max(0.0, std::real(minus2.trace()));
  CMat sys;
  if (rng.uniform() * (pp2 + pm2) < pp2) {
    sys = plus2 / pp2;
  } else {
    sys = minus2 / pm2;
    s = -s;
  }
  double g = 1.0;
  if (!ctx.identity_obs) {
    std::vector<double> probs(d);
    double total = 0.0;
    for (int i = 0; i < d; ++i) {
      const CVec v = ctx.obs_vecs.col(i);
      probs[i] = std::max(0.0, std::real(v.dot(sys * v)));
      total += probs[i];
    }
    if (total > 0.0) {
      for (auto& p : probs) p /= total;
      g = ctx.obs_vals(rng.categorical(probs));
    }
  }
  *value_out =
      sp.overhead * fs.coeff[k] / ctx.lambda[k] * s * g;
  *copies_out = copies;
}

struct StreamTotals {
  double sum = 0.0;
  double sumsq = 0.0;
  double copies_sum = 0.0;
  long copies_min = std::numeric_limits<long>::max();
  long copies_max = 0;
};

StreamTotals run_hybrid_stream(const HybridContext& ctx, long shots,
                               std::uint64_t seed, int workers) {
  constexpr long kChunk = 1024;
  const long n_chunks = (shots + kChunk - 1) / kChunk;
  std::vector<StreamTotals> accs(static_cast<std::size_t>(n_chunks));
  auto run_range = [&](int w) {
    for (long ci = w; ci < n_chunks; ci += workers) {
      const long lo = ci * kChunk;
      const long hi = std::min(shots, lo + kChunk);
      StreamTotals acc;
      for (long sidx = lo; sidx < hi; ++sidx) {
        double value = 0.0;
        long copies = 0;
        hybrid_shot(ctx, seed, sidx, &value, &copies);
        acc.sum += value;
        acc.sumsq += value * value;
        acc.copies_sum += static_cast<double>(copies);
        acc.copies_min = std::min(acc.copies_min, copies);
        acc.copies_max = std::max(acc.copies_max, copies);
      }
      accs[static_cast<std::size_t>(ci)] = acc;
    }
  };
  if (workers <= 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& t : pool) t.join();
  }
  StreamTotals total;
  for (const auto& a : accs) {
    total.sum += a.sum;
    total.sumsq += a.sumsq;
    total.copies_sum += a.copies_sum;
    total.copies_min = std::min(total.copies_min, a.copies_min);
    total.copies_max = std::max(total.copies_max, a.copies_max);
  }
  return total;
}

EstimatorReport report_from(const StreamTotals& t, long shots,
                            double overhead, double var_bound,
                            double delta_prime) {
  EstimatorReport rep;
  rep.samples = shots;
  rep.mean = t.sum / static_cast<double>(shots);
  const double var =
      shots > 1 ? std::max(0.0, (t.sumsq - t.sum * t.sum /
                                              static_cast<double>(shots)) /
                                    static_cast<double>(shots - 1))
                : 0.0;
  rep.std_error = std::sqrt(var / static_cast<double>(shots));
  rep.overhead = overhead;
  rep.variance_amplification = var_bound;
  rep.bias_bound = delta_prime;
  rep.copies_min = t.copies_min;
  rep.copies_max = t.copies_max;
  rep.copies_mean = t.copies_sum / static_cast<double>(shots);
  return rep;
}

}  // namespace

HybridRun run_hybrid_circuit(const FilterSpec& fs, const NoiseModel& nm,
                             const Observable& obs, long shots,
                             double delta_prime, std::uint64_t seed,
                             int workers) {
  if (shots <= 0)
    throw std::invalid_argument("run_hybrid_circuit: shots <= 0");
  if (delta_prime <= 0.0)
    throw std::invalid_argument("run_hybrid_circuit: delta_prime <= 0");
  if (obs.dim() != nm.d)
    throw std::invalid_argument("run_hybrid_circuit: observable dimension");
  const double onorm = op_norm(obs.mat);
  const HybridMetrics hm = hybrid_metrics(fs, nm, onorm);
  double abs_tail = 0.0;
  for (int k = 1; k <= fs.order; ++k) abs_tail += std::abs(fs.coeff[k]);
  double eps = 0.1;
  if (abs_tail > 0.0 && onorm > 0.0)
    eps = std::min(0.4, delta_prime / (onorm * abs_tail));

  HybridContext ctx;
  ctx.nm = &nm;
  ctx.fs = &fs;
  ctx.lambda = hm.lambda;
  ctx.specs.resize(static_cast<std::size_t>(fs.order) + 1);
  for (int k = 1; k <= fs.order; ++k) {
    if (hm.lambda[k] <= 0.0) continue;
    ctx.specs[static_cast<std::size_t>(k)] =
        build_series(0.5 * k, k * k, eps);
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(obs.mat);
  ctx.obs_vecs = es.eigenvectors();
  ctx.obs_vals = es.eigenvalues();
  ctx.rho_probs.assign(static_cast<std::size_t>(nm.d), 0.0);
  double total = 0.0;
  for (int i = 0; i < nm.d; ++i) {
    const CVec v = ctx.obs_vecs.col(i);
    ctx.rho_probs[static_cast<std::size_t>(i)] =
        std::max(0.0, std::real(v.dot(nm.rho.mat * v)));
    total += ctx.rho_probs[static_cast<std::size_t>(i)];
  }
  for (auto& p : ctx.rho_probs) p /= total;

  double mean_rescale = 0.0;
  double var_bound = 0.0;
  for (int k = 0; k <= fs.order; ++k) {
    if (hm.lambda[k] <= 0.0) continue;
    const double ck =
        k == 0 ? 1.0 : ctx.specs[static_cast<std::size_t>(k)].overhead;
    mean_rescale += hm.lambda[k] * ck;
    var_bound +=
        fs.coeff[k] * fs.coeff[k] * hm.sigma[k] * hm.sigma[k] / hm.lambda[k];
  }

  HybridRun run;
  ctx.identity_obs = false;
  const StreamTotals num =
      run_hybrid_stream(ctx, shots, derive_seed(seed, 1), workers);
  ctx.identity_obs = true;
  const StreamTotals den =
      run_hybrid_stream(ctx, shots, derive_seed(seed, 2), workers);
  run.numerator = report_from(num, shots, mean_rescale, var_bound,
                              delta_prime);
  run.denominator = report_from(den, shots, mean_rescale, var_bound,
                                delta_prime);
  run.ratio = run.numerator.mean / run.denominator.mean;
  return run;
}

VdMetrics vd_metrics(const NoiseModel& nm, int l) {
  if (l < 1) throw std::invalid_argument("vd_metrics: l must be >= 1");
  double tr_err_l = 0.0;
  double tr_rho_l = std::pow(1.0 - nm.lambda, l);
  for (double p : nm.err_spectrum) {
    tr_err_l += std::pow(p, l);
    tr_rho_l += std::pow(nm.lambda * p, l);
  }
  const double q = std::pow(nm.lambda / (1.0 - nm.lambda), l) * tr_err_l;
  VdMetrics vm;
  vm.delta = 2.0 * q / (1.0 + q);
  vm.overhead = 1.0 / (tr_rho_l * tr_rho_l);
  return vm;
}

int vd_design(const NoiseModel& nm, double delta, int max_l) {
  for (int l = 1; l <= max_l; ++l) {
    if (vd_metrics(nm, l).delta <= delta) return l;
  }
  throw InfeasibleDesign("vd_design: no copy count within cap");
}

namespace {

// amplitude of the sine-window phase-estimation register at bin l for
// eigenvalue x (evolution time 2 pi)
Cx window_amplitude(int m, long l, double x) {
  const long n = 1L << m;
  const double root = std::sqrt(1.0 / std::pow(2.0, m - 1));
  const double phase = -2.0 * kPi * (static_cast<double>(l) / n - x);
  const Cx w = std::exp(Cx(0.0, phase));
  Cx cur(1.0, 0.0);
  Cx acc(0.0, 0.0);
  for (long k = 0; k < n; ++k) {
    const double ak = root * std::sin(kPi * (k + 0.5) / n);
    acc += ak * cur;
    cur *= w;
  }
  return acc / std::sqrt(static_cast<double>(n));
}

}  // namespace

OriginalMetrics qpca_original_metrics(const NoiseModel& nm, int m,
                                      double delta_target) {
  if (m < 1 || m > 25)
    throw std::invalid_argument("qpca_original_metrics: m out of range");
  if (delta_target <= 0.0)
    throw std::invalid_argument("qpca_original_metrics: delta <= 0");
  const long n = 1L << m;
  const long l_star = std::lround((1.0 - nm.lambda) * n);
  const double s_sig =
      (1.0 - nm.lambda) *
      std::norm(window_amplitude(m, l_star, 1.0 - nm.lambda));
  double s_err = 0.0;
  for (double p : nm.err_spectrum) {
    if (p <= 0.0) continue;
    s_err += nm.lambda * p *
             std::norm(window_amplitude(m, l_star, nm.lambda * p));
  }
  OriginalMetrics om;
  om.m = m;
  om.delta_achieved = 2.0 * s_err / (s_sig + s_err);
  const double reps = static_cast<double>(n - 1);
  om.copies = 4.0 * kPi * kPi * reps * reps /
              ((1.0 - nm.lambda) * delta_target);
  om.overhead = 1.0 / (s_sig + s_err);
  return om;
}

OriginalMetrics qpca_original_design(const NoiseModel& nm,
                                     double delta_target, int max_m) {
  for (int m = 1; m <= max_m; ++m) {
    const OriginalMetrics om = qpca_original_metrics(nm, m, delta_target);
    if (om.delta_achieved <= delta_target) return om;
  }
  throw InfeasibleDesign("qpca_original_design: no register size within cap");
}

namespace {

double lambda_percentile(const std::vector<double>& lambda, double q) {
  double cum = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    cum += lambda[k];
    if (cum >= q - 1e-15)
      return 1.0 + 2.0 * static_cast<double>(k) * k;
  }
  const double k = static_cast<double>(lambda.size()) - 1.0;
  return 1.0 + 2.0 * k * k;
}

}  // namespace

std::vector<SweepRow> compare_sweep(const NoiseModel& nm,
                                    const std::vector<double>& deltas,
                                    double onorm, int workers) {
  if (deltas.empty())
    throw std::invalid_argument("compare_sweep: empty delta grid");
  if (nm.eta <= 0.0)
    throw std::invalid_argument("compare_sweep: eta must be positive");
  if (workers < 1) workers = 1;
  const double eta = nm.eta;
  const double eps1 = 1e-3;
  const long n = static_cast<long>(deltas.size());
  std::vector<SweepRow> rows(static_cast<std::size_t>(4 * n));
  std::vector<std::exception_ptr> fails(static_cast<std::size_t>(n));
  auto run_point = [&](long i) {
    const double delta = deltas[static_cast<std::size_t>(i)];
    if (delta <= 0.0)
      throw std::invalid_argument("compare_sweep: delta must be positive");
    SweepRow* out = &rows[static_cast<std::size_t>(4 * i)];

    const double eps2c = std::min(
        0.05, (1.0 - eps1) * std::sqrt(delta * (1.0 - eta) /
                                       (2.0 * onorm * eta)));
    const FilterSpec fsc = design_filter(eta, eps1, eps2c);
    const CoherentMetrics cm = coherent_metrics(fsc, nm, onorm);
    out[0] = {delta,      "coherent", cm.copies, cm.copies,
              cm.copies,  cm.copies,  cm.gamma2};

    const double eps2h = std::min(
        0.05, delta * (1.0 - eta) * (1.0 - eps1) /
                  (eta * (2.0 * onorm + delta)));
    const FilterSpec fsh = design_filter(eta, eps1, eps2h);
    const HybridMetrics hm = hybrid_metrics(fsh, nm, onorm);
    out[1] = {delta,
              "hybrid",
              hm.copies,
              lambda_percentile(hm.lambda, 0.25),
              lambda_percentile(hm.lambda, 0.50),
              lambda_percentile(hm.lambda, 0.95),
              hm.gamma2};

    const int l = vd_design(nm, delta);
    const VdMetrics vm = vd_metrics(nm, l);
    const double lc = static_cast<double>(l);
    out[2] = {delta, "vd", lc, lc, lc, lc, vm.overhead};

    const OriginalMetrics om = qpca_original_design(nm, delta);
    out[3] = {delta,     "original", om.copies, om.copies,
              om.copies, om.copies,  om.overhead};
  };
  auto run_range = [&](int w) {
    for (long i = w; i < n; i += workers) {
      try {
        run_point(i);
      } catch (...) {
        fails[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    run_range(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run_range, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& f : fails)
    if (f) std::rethrow_exception(f);
  return rows;
}

}  // namespace vdme
