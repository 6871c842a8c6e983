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

#include "vdme/lcs.hpp"

#include <cmath>
#include <stdexcept>

namespace vdme {

namespace {

// plain kronecker product, not subject to the max_dim guard (dilated
// superop matrices legitimately exceed it)
CMat kron_local(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

DilatedChannel dilate_cptp(const SuperOp& phi) {
  const int din = phi.dim_in;
  const int dout = phi.dim_out;
  DilatedChannel dc;
  dc.d_in = din;
  dc.d_out = dout;
  dc.base.dim_in = 2 * din;
  dc.base.dim_out = 2 * dout;
  dc.base.mat = CMat::Zero(4 * dout * dout, 4 * din * din);
  // image of each basis unit |a i><b j| is |a><b| (x) phi(|i><j|)
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int j = 0; j < din; ++j)
        for (int i = 0; i < din; ++i) {
          const CVec col = phi.mat.col(j * din + i);
          const Eigen::Index in_idx =
              Eigen::Index(b * din + j) * (2 * din) + (a * din + i);
          for (int l = 0; l < dout; ++l)
            for (int k = 0; k < dout; ++k) {
              const Eigen::Index out_idx =
                  Eigen::Index(b * dout + l) * (2 * dout) + (a * dout + k);
              dc.base.mat(out_idx, in_idx) = col(Eigen::Index(l) * dout + k);
            }
        }
  return dc;
}

DilatedChannel dilate_convex(const std::vector<AsymTerm>& terms, long guard) {
  if (terms.empty()) throw std::invalid_argument("dilate_convex: no terms");
  if (static_cast<long>(terms.size()) > guard)
    throw std::invalid_argument("dilate_convex: term count exceeds guard");
  const int d = static_cast<int>(terms.front().u.rows());
  double total = 0.0;
  DilatedChannel dc;
  dc.d_in = d;
  dc.d_out = d;
  dc.base.dim_in = 2 * d;
  dc.base.dim_out = 2 * d;
  dc.base.mat = CMat::Zero(4 * d * d, 4 * d * d);
  for (const auto& t : terms) {
    if (t.q < -1e-12) throw std::invalid_argument("dilate_convex: q < 0");
    if (t.u.rows() != d || t.u.cols() != d || t.v.rows() != d ||
        t.v.cols() != d)
      throw std::invalid_argument("dilate_convex: dimension mismatch");
    if (!is_unitary(t.u) || !is_unitary(t.v))
      throw std::invalid_argument("dilate_convex: factor not unitary");
    total += t.q;
    CMat w = CMat::Zero(2 * d, 2 * d);
    w.topLeftCorner(d, d) = t.u;
    w.bottomRightCorner(d, d) = t.v;
    dc.base.mat += t.q * kron_local(w.conjugate(), w);
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("dilate_convex: weights must sum to 1");
  return dc;
}

DilatedChannel compose_dilated(const DilatedChannel& a,
                               const DilatedChannel& b) {
  if (a.d_in != b.d_out)
    throw std::invalid_argument("compose_dilated: dimension mismatch");
  DilatedChannel dc;
  dc.d_in = b.d_in;
  dc.d_out = a.d_out;
  dc.base = compose(a.base, b.base);
  return dc;
}

DilatedChannel identity_dilated(int d) {
  DilatedChannel dc;
  dc.d_in = d;
  dc.d_out = d;
  dc.base = identity_superop(2 * d);
  return dc;
}

CMat x_readout(const DilatedChannel& dc, const CMat& a) {
  const int d = dc.d_in;
  if (a.rows() != d || a.cols() != d)
    throw std::invalid_argument("x_readout: dimension mismatch");
  CMat in = CMat::Zero(2 * d, 2 * d);
  in.topLeftCorner(d, d) = 0.5 * a;
  in.topRightCorner(d, d) = 0.5 * a;
  in.bottomLeftCorner(d, d) = 0.5 * a;
  in.bottomRightCorner(d, d) = 0.5 * a;
  const CMat out = dc.base.apply(in);
  const int e = dc.d_out;
  return out.block(0, e, e, e) + out.block(e, 0, e, e);
}

DilatedChannel dilated_swap_step(const DensityMatrix& rho, double delta,
                                 Side side, bool controlled) {
  const int dr = rho.dim();
  const int ds = controlled ? 2 * dr : dr;
  const CMat s = swap_operator(dr);
  const CMat eye = CMat::Identity(dr * dr, dr * dr);
  const Cx mi(0.0, -1.0);
  const CMat e_minus = std::cos(delta) * eye + mi * std::sin(delta) * s;
  CMat g;
  if (!controlled) {
    g = e_minus;
  } else {
    const CMat e_plus = e_minus.adjoint();
    CMat p0 = CMat::Zero(2, 2), p1 = CMat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    // control 0 runs the angle-reversed swap
    g = kron_local(p0, e_plus) + kron_local(p1, e_minus);
  }
  const CMat full_eye = CMat::Identity(ds * dr, ds * dr);
  std::vector<AsymTerm> terms(1);
  terms[0].q = 1.0;
  if (side == Side::left) {
    terms[0].u = g;
    terms[0].v = full_eye;
  } else {
    terms[0].u = full_eye;
    terms[0].v = g;
  }
  const DilatedChannel attach = dilate_cptp(attach_state(rho, ds));
  const DilatedChannel swap_dc = dilate_convex(terms);
  const DilatedChannel tr = dilate_cptp(ptrace_superop({ds, dr}, 0));
  return compose_dilated(tr, compose_dilated(swap_dc, attach));
}

DilatedChannel dilated_phase(int d, double phi, int active) {
  CMat p = CMat::Identity(2, 2);
  p(active, active) = std::exp(Cx(0.0, phi));
  DilatedChannel dc;
  dc.d_in = d;
  dc.d_out = d;
  dc.base = unitary_channel(kron_local(p, CMat::Identity(d, d)));
  return dc;
}

namespace {

DilatedChannel chain_impl(const SeriesSpec& spec, const DensityMatrix& rho,
                          const IndexSequence& seq, bool controlled) {
  const int d = rho.dim();
  const int ds = controlled ? 2 * d : d;
  const double sgn = spec.T >= 0.0 ? 1.0 : -1.0;
  const int lmax = spec.L;
  // per-order step channels are reused across segments
  std::vector<DilatedChannel> th_left(lmax + 1), th_right(lmax + 1);
  for (int l = 0; l <= lmax; ++l) {
    th_left[l] = dilated_swap_step(rho, sgn * spec.theta[l], Side::left,
                                   controlled);
    th_right[l] = dilated_swap_step(rho, sgn * spec.theta[l], Side::right,
                                    controlled);
  }
  const DilatedChannel quarter_left =
      dilated_swap_step(rho, 0.5 * kPi, Side::left, controlled);
  const DilatedChannel quarter_right =
      dilated_swap_step(rho, 0.5 * kPi, Side::right, controlled);
  DilatedChannel dc = identity_dilated(ds);
  for (int j = 0; j < spec.r; ++j) {
    const int l = seq.left[j];
    const int lp = seq.right[j];
    dc = compose_dilated(th_right[lp], dc);
    for (int k = 0; k < 2 * lp; ++k) dc = compose_dilated(quarter_right, dc);
    dc = compose_dilated(th_left[l], dc);
    for (int k = 0; k < 2 * l; ++k) dc = compose_dilated(quarter_left, dc);
  }
  return dc;
}

}  // namespace

DilatedChannel dilated_general_chain(const SeriesSpec& spec,
                                     const DensityMatrix& rho,
                                     const IndexSequence& seq) {
  return chain_impl(spec, rho, seq, false);
}

DilatedChannel dilated_controlled_chain(const SeriesSpec& spec,
                                        const DensityMatrix& rho,
                                        const IndexSequence& seq) {
  return chain_impl(spec, rho, seq, true);
}

DilatedChannel dilated_pure_chain(const PureSpec& ps, const CMat& psi_proj,
                                  const IndexSequence& seq) {
  const int d = static_cast<int>(psi_proj.rows());
  const DensityMatrix psi = make_density(psi_proj);
  const DilatedChannel th_left =
      dilated_swap_step(psi, ps.theta0, Side::left, false);
  const DilatedChannel th_right =
      dilated_swap_step(psi, ps.theta0, Side::right, false);
  const DilatedChannel quarter_left =
      dilated_swap_step(psi, 0.5 * kPi, Side::left, false);
  const DilatedChannel quarter_right =
      dilated_swap_step(psi, 0.5 * kPi, Side::right, false);
  const double phi_prime = ps.phi + kPi / 2.0;
  const DilatedChannel ph_left = dilated_phase(d, phi_prime, 0);
  const DilatedChannel ph_right = dilated_phase(d, phi_prime, 1);
  DilatedChannel dc = identity_dilated(d);
  for (int j = 0; j < ps.r; ++j) {
    if (seq.right[j] == 0) {
      dc = compose_dilated(th_right, dc);
    } else {
      dc = compose_dilated(quarter_right, dc);
      dc = compose_dilated(ph_right, dc);
    }
    if (seq.left[j] == 0) {
      dc = compose_dilated(th_left, dc);
    } else {
      dc = compose_dilated(quarter_left, dc);
      dc = compose_dilated(ph_left, dc);
    }
  }
  return dc;
}

void step_dilated_state(CMat& tau, const CMat& rho, int d_idle, double delta,
                        Side side, bool controlled) {
  const int big = static_cast<int>(tau.rows()) / 2;
  const int dr = static_cast<int>(rho.rows());
  const int gs = dr * d_idle;
  const int ng = controlled ? 2 : 1;
  if (2 * big != tau.rows() || ng * gs != big)
    throw std::invalid_argument("step_dilated_state: dimension mismatch");
  CMat rho_ext;
  if (d_idle == 1)
    rho_ext = rho;
  else
    rho_ext = kron_local(rho, CMat::Identity(d_idle, d_idle));
  const std::vector<int> dims = {dr, d_idle};
  // per row-group swap angle: the ancilla branch selects left/right and the
  // control qubit (when present) selects the sign
  auto angle = [&](int gi) -> double {
    const int a = gi / ng;
    const bool active = (side == Side::left) ? (a == 0) : (a == 1);
    if (!active) return 0.0;
    if (!controlled) return delta;
    const int c = gi % ng;
    return c == 0 ? -delta : delta;
  };
  const Cx mi(0.0, -1.0);
  const Cx pi_(0.0, 1.0);
  for (int g1 = 0; g1 < 2 * ng; ++g1)
    for (int g2 = 0; g2 < 2 * ng; ++g2) {
      const double a1 = angle(g1);
      const double a2 = angle(g2);
      if (a1 == 0.0 && a2 == 0.0) continue;
      const CMat block = tau.block(g1 * gs, g2 * gs, gs, gs);
      const double c1 = std::cos(a1), s1 = std::sin(a1);
      const double c2 = std::cos(a2), s2 = std::sin(a2);
      CMat nb = (c1 * c2) * block;
      if (s1 != 0.0) nb += (mi * (s1 * c2)) * (rho_ext * block);
      if (s2 != 0.0) nb += (pi_ * (c1 * s2)) * (block * rho_ext);
      if (s1 != 0.0 && s2 != 0.0) {
        const CMat idle_part = partial_trace(block, dims, 1);
        nb += (s1 * s2) * kron_local(rho, idle_part);
      }
      tau.block(g1 * gs, g2 * gs, gs, gs) = nb;
    }
}

void phase_dilated_state(CMat& tau, double phi, int active) {
  const int d = static_cast<int>(tau.rows()) / 2;
  const Cx e = std::exp(Cx(0.0, phi));
  if (active == 0) {
    tau.block(0, d, d, d) *= e;
    tau.block(d, 0, d, d) *= std::conj(e);
  } else {
    tau.block(0, d, d, d) *= std::conj(e);
    tau.block(d, 0, d, d) *= e;
  }
}

CMat x_readout_state(const CMat& tau) {
  const int d = static_cast<int>(tau.rows()) / 2;
  return tau.block(0, d, d, d) + tau.block(d, 0, d, d);
}

}  // namespace vdme
