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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "vdme/lcs.hpp"

using namespace vdme;

namespace {

CMat random_op(int d, Rng& rng) {
  CMat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = Cx(rng.normal(), rng.normal());
  return m;
}

// swap between tensor slots `a` and `b` of a product space with dims[]
CMat slot_swap(const std::vector<int>& dims, int sa, int sb) {
  int total = 1;
  for (int d : dims) total *= d;
  CMat s = CMat::Zero(total, total);
  const int n = static_cast<int>(dims.size());
  std::vector<int> idx(n, 0);
  for (int col = 0; col < total; ++col) {
    int rem = col;
    for (int k = n - 1; k >= 0; --k) {
      idx[k] = rem % dims[k];
      rem /= dims[k];
    }
    std::swap(idx[sa], idx[sb]);
    int row = 0;
    for (int k = 0; k < n; ++k) row = row * dims[k] + idx[k];
    s(row, col) = 1.0;
  }
  return s;
}

bool chain_is_cptp(const DilatedChannel& dc) {
  const ChoiMatrix j = choi(dc.base);
  if (!choi_hermitian(j, 1e-9)) return false;
  if (choi_min_eigenvalue(j) < -1e-9) return false;
  const CMat red = choi_reduction(j);
  return (red - CMat::Identity(red.rows(), red.cols())).cwiseAbs().maxCoeff() <
         1e-9;
}

}  // namespace

TEST_CASE("dilate_cptp applies the base map on every ancilla block") {
  Rng rng(60, 0);
  const SuperOp phi = unitary_channel(random_unitary(3, rng));
  const DilatedChannel dc = dilate_cptp(phi);
  const CMat a = random_op(3, rng);
  for (int ai = 0; ai < 2; ++ai)
    for (int bi = 0; bi < 2; ++bi) {
      CMat unit = CMat::Zero(2, 2);
      unit(ai, bi) = 1.0;
      const CMat out = dc.base.apply(tensor(unit, a));
      CHECK((out - tensor(unit, phi.apply(a))).cwiseAbs().maxCoeff() < 1e-12);
    }

  // dimension-changing maps dilate too
  const DensityMatrix sigma = random_state(2, StateKind::mixed, 7);
  const DilatedChannel att = dilate_cptp(attach_state(sigma, 3));
  const CMat out = att.base.apply(tensor(CMat::Identity(2, 2), a));
  CHECK((out - tensor(CMat::Identity(2, 2), tensor(a, sigma.mat)))
            .cwiseAbs()
            .maxCoeff() < 1e-12);
}

TEST_CASE("x_readout of a convex dilation gives the symmetrized map") {
  Rng rng(61, 0);
  const CMat u1 = random_unitary(3, rng), v1 = random_unitary(3, rng);
  const CMat u2 = random_unitary(3, rng), v2 = random_unitary(3, rng);
  const DilatedChannel dc = dilate_convex({{0.7, u1, v1}, {0.3, u2, v2}});
  CHECK(chain_is_cptp(dc));
  const CMat a = random_op(3, rng);
  const CMat expect =
      0.7 * 0.5 * (u1 * a * v1.adjoint() + v1 * a * u1.adjoint()) +
      0.3 * 0.5 * (u2 * a * v2.adjoint() + v2 * a * u2.adjoint());
  CHECK((x_readout(dc, a) - expect).cwiseAbs().maxCoeff() < 1e-12);

  // single symmetric term reduces to the plain unitary channel
  const DilatedChannel sym = dilate_convex({{1.0, u1, u1}});
  CHECK((x_readout(sym, a) - u1 * a * u1.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);

  CHECK_THROWS_AS(dilate_convex({{0.5, u1, v1}}), std::invalid_argument);
  CHECK_THROWS_AS(dilate_convex({{1.0, 0.5 * u1, v1}}), std::invalid_argument);
}

TEST_CASE("single dilated swap step reads out the partial swap factor") {
  Rng rng(62, 0);
  const DensityMatrix rho = random_state(3, StateKind::mixed, rng.next_u64());
  const double delta = 0.41;
  const CMat a = random_op(3, rng);
  const CMat i3 = CMat::Identity(3, 3);
  const CMat w_minus =
      std::cos(delta) * i3 - Cx(0, 1) * std::sin(delta) * rho.mat;
  const CMat w_plus =
      std::cos(delta) * i3 + Cx(0, 1) * std::sin(delta) * rho.mat;
  const CMat expect = 0.5 * (w_minus * a + a * w_plus);

  for (Side side : {Side::left, Side::right}) {
    const DilatedChannel step = dilated_swap_step(rho, delta, side);
    CHECK(chain_is_cptp(step));
    CHECK((x_readout(step, a) - expect).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("composed left and right steps accumulate on opposite sides") {
  Rng rng(63, 0);
  const DensityMatrix rho = random_state(2, StateKind::mixed, rng.next_u64());
  const double d1 = 0.3, d2 = 0.8;
  const CMat i2 = CMat::Identity(2, 2);
  const CMat wm1 = std::cos(d1) * i2 - Cx(0, 1) * std::sin(d1) * rho.mat;
  const CMat wm2 = std::cos(d2) * i2 - Cx(0, 1) * std::sin(d2) * rho.mat;
  const CMat a = random_op(2, rng);

  const DilatedChannel both = compose_dilated(
      dilated_swap_step(rho, d2, Side::right),
      dilated_swap_step(rho, d1, Side::left));
  CHECK(chain_is_cptp(both));
  // B = wm1 on the left, C = wm2 on the right branch
  const CMat expect =
      0.5 * (wm1 * a * wm2.adjoint() + wm2 * a * wm1.adjoint());
  CHECK((x_readout(both, a) - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("general chain readout equals the sampled effective map") {
  Rng rng(64, 0);
  for (int d : {2, 3}) {
    const DensityMatrix rho = random_state(d, StateKind::mixed, rng.next_u64());
    const SeriesSpec spec = build_series_fixed_order(1.0, 2, 2);
    for (int trial = 0; trial < 3; ++trial) {
      const IndexSequence seq = sample_indices(spec, rng);
      const DmeSample sample = sample_from_indices(spec, rho, seq);
      const DilatedChannel chain = dilated_general_chain(spec, rho, seq);
      CHECK(chain_is_cptp(chain));
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          CMat unit = CMat::Zero(d, d);
          unit(i, j) = 1.0;
          CHECK((x_readout(chain, unit) - sample.effective_map.apply(unit))
                    .cwiseAbs()
                    .maxCoeff() < 1e-10);
        }
    }
  }
}

TEST_CASE("controlled chain readout equals the controlled sample") {
  Rng rng(65, 0);
  const int d = 2;
  const DensityMatrix rho = random_state(d, StateKind::mixed, rng.next_u64());
  const SeriesSpec spec = build_series_fixed_order(0.9, 1, 2);
  for (int trial = 0; trial < 3; ++trial) {
    const IndexSequence seq = sample_indices(spec, rng);
    CMat b = CMat::Identity(2 * d, 2 * d), c = b;
    for (int v : seq.left) b = controlled_segment_factor(spec, rho, v) * b;
    for (int v : seq.right) c = controlled_segment_factor(spec, rho, v) * c;
    const SuperOp expect = add(scale(asymmetric_map(b, c), 0.5),
                               scale(asymmetric_map(c, b), 0.5));
    const DilatedChannel chain = dilated_controlled_chain(spec, rho, seq);
    CHECK(chain_is_cptp(chain));
    for (int i = 0; i < 2 * d; ++i)
      for (int j = 0; j < 2 * d; ++j) {
        CMat unit = CMat::Zero(2 * d, 2 * d);
        unit(i, j) = 1.0;
        CHECK((x_readout(chain, unit) - expect.apply(unit))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
      }
  }
}

TEST_CASE("pure chain readout equals the pure sample") {
  Rng rng(66, 0);
  const int d = 3;
  const DensityMatrix psi = random_state(d, StateKind::pure, rng.next_u64());
  const PureSpec ps = make_pure_spec(1.3);
  for (int trial = 0; trial < 4; ++trial) {
    const DmeSample sample = sample_pure(ps, psi.mat, rng);
    const DilatedChannel chain = dilated_pure_chain(ps, psi.mat, sample.seq);
    CHECK(chain_is_cptp(chain));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CMat unit = CMat::Zero(d, d);
        unit(i, j) = 1.0;
        CHECK((x_readout(chain, unit) - sample.effective_map.apply(unit))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
      }
  }
}

TEST_CASE("step_dilated_state matches an explicit swap-circuit oracle") {
  Rng rng(67, 0);
  const int dr = 2, didle = 3;
  const DensityMatrix rho = random_state(dr, StateKind::mixed, rng.next_u64());
  const double delta = 0.57;
  const int dsys = dr * didle;

  // oracle: anc (x) dr (x) idle (x) copy; controlled swap on slots 1 and 3
  const CMat s13 = slot_swap({dr, didle, dr}, 0, 2);
  const CMat g = std::cos(delta) * CMat::Identity(dsys * dr, dsys * dr) -
                 Cx(0, 1) * std::sin(delta) * s13;
  for (Side side : {Side::left, Side::right}) {
    CMat gfull = CMat::Zero(2 * dsys * dr, 2 * dsys * dr);
    const int active = side == Side::left ? 0 : 1;
    for (int br = 0; br < 2; ++br)
      gfull.block(br * dsys * dr, br * dsys * dr, dsys * dr, dsys * dr) =
          br == active ? g : CMat::Identity(dsys * dr, dsys * dr);

    CMat tau(2 * dsys, 2 * dsys);
    for (int j = 0; j < 2 * dsys; ++j)
      for (int i = 0; i < 2 * dsys; ++i)
        tau(i, j) = Cx(rng.normal(), rng.normal());

    // extend with the fresh copy, conjugate, trace the copy
    CMat ext = CMat::Zero(2 * dsys * dr, 2 * dsys * dr);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const CMat blk = tau.block(a * dsys, b * dsys, dsys, dsys);
        ext.block(a * dsys * dr, b * dsys * dr, dsys * dr, dsys * dr) =
            tensor(blk, rho.mat);
      }
    const CMat conj = gfull * ext * gfull.adjoint();
    CMat want = CMat::Zero(2 * dsys, 2 * dsys);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const CMat blk =
            conj.block(a * dsys * dr, b * dsys * dr, dsys * dr, dsys * dr);
        CMat red = CMat::Zero(dsys, dsys);
        for (int i = 0; i < dsys; ++i)
          for (int j = 0; j < dsys; ++j)
            for (int k = 0; k < dr; ++k) red(i, j) += blk(i * dr + k, j * dr + k);
        want.block(a * dsys, b * dsys, dsys, dsys) = red;
      }

    CMat got = tau;
    step_dilated_state(got, rho.mat, didle, delta, side);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("controlled step oracle with a leading control qubit") {
  Rng rng(68, 0);
  const int dr = 2, didle = 1;
  const DensityMatrix rho = random_state(dr, StateKind::mixed, rng.next_u64());
  const double delta = 0.44;
  const int dsys = 2 * dr * didle;  // control (x) rho-factor (x) idle

  const CMat s_swap = slot_swap({dr, dr}, 0, 1);
  auto gmat = [&](double ang) {
    return std::cos(ang) * CMat::Identity(dr * dr, dr * dr) -
           Cx(0, 1) * std::sin(ang) * s_swap;
  };
  for (Side side : {Side::left, Side::right}) {
    const int active = side == Side::left ? 0 : 1;
    // full: anc (x) ctrl (x) dr (x) copy
    CMat gfull = CMat::Zero(2 * dsys * dr, 2 * dsys * dr);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        CMat blk = CMat::Identity(dr * dr, dr * dr);
        if (a == active) blk = gmat(c == 0 ? -delta : delta);
        gfull.block((a * 2 + c) * dr * dr, (a * 2 + c) * dr * dr, dr * dr,
                    dr * dr) = blk;
      }

    CMat tau(2 * dsys, 2 * dsys);
    for (int j = 0; j < 2 * dsys; ++j)
      for (int i = 0; i < 2 * dsys; ++i)
        tau(i, j) = Cx(rng.normal(), rng.normal());

    CMat ext = CMat::Zero(2 * dsys * dr, 2 * dsys * dr);
    for (int a = 0; a < 2 * 2; ++a)
      for (int b = 0; b < 2 * 2; ++b)
        ext.block(a * dr * dr, b * dr * dr, dr * dr, dr * dr) =
            tensor(CMat(tau.block(a * dr, b * dr, dr, dr)), rho.mat);
    const CMat conj = gfull * ext * gfull.adjoint();
    CMat want = CMat::Zero(2 * dsys, 2 * dsys);
    for (int a = 0; a < 2 * 2; ++a)
      for (int b = 0; b < 2 * 2; ++b) {
        const CMat blk = conj.block(a * dr * dr, b * dr * dr, dr * dr, dr * dr);
        CMat red = CMat::Zero(dr, dr);
        for (int i = 0; i < dr; ++i)
          for (int j = 0; j < dr; ++j)
            for (int k = 0; k < dr; ++k) red(i, j) += blk(i * dr + k, j * dr + k);
        want.block(a * dr, b * dr, dr, dr) = red;
      }

    CMat got = tau;
    step_dilated_state(got, rho.mat, didle, delta, side, true);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("phase state update and x readout match their channel forms") {
  Rng rng(69, 0);
  const int d = 3;
  CMat tau(2 * d, 2 * d);
  for (int j = 0; j < 2 * d; ++j)
    for (int i = 0; i < 2 * d; ++i) tau(i, j) = Cx(rng.normal(), rng.normal());

  for (int active : {0, 1}) {
    const double phi = 1.1;
    const DilatedChannel ph = dilated_phase(d, phi, active);
    CHECK(chain_is_cptp(ph));
    const CMat want = ph.base.apply(tau);
    CMat got = tau;
    phase_dilated_state(got, phi, active);
    CHECK((got - want).cwiseAbs().maxCoeff() < 1e-12);
  }

  const CMat manual = tau.block(0, d, d, d) + tau.block(d, 0, d, d);
  CHECK((x_readout_state(tau) - manual).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("state stepping reproduces the general chain readout") {
  Rng rng(70, 0);
  const int d = 2;
  const DensityMatrix rho = random_state(d, StateKind::mixed, rng.next_u64());
  const SeriesSpec spec = build_series_fixed_order(1.0, 2, 2);
  const IndexSequence seq = sample_indices(spec, rng);
  const DilatedChannel chain = dilated_general_chain(spec, rho, seq);

  const CMat a = random_op(d, rng);
  CMat tau(2 * d, 2 * d);
  tau.block(0, 0, d, d) = 0.5 * a;
  tau.block(0, d, d, d) = 0.5 * a;
  tau.block(d, 0, d, d) = 0.5 * a;
  tau.block(d, d, d, d) = 0.5 * a;

  const double sgn = spec.T >= 0 ? 1.0 : -1.0;
  for (int j = 0; j < spec.r; ++j) {
    const int l = seq.left[j], lp = seq.right[j];
    step_dilated_state(tau, rho.mat, 1, sgn * spec.theta[lp], Side::right);
    for (int q = 0; q < 2 * lp; ++q)
      step_dilated_state(tau, rho.mat, 1, kPi / 2.0, Side::right);
    step_dilated_state(tau, rho.mat, 1, sgn * spec.theta[l], Side::left);
    for (int q = 0; q < 2 * l; ++q)
      step_dilated_state(tau, rho.mat, 1, kPi / 2.0, Side::left);
  }
  const CMat via_chain = x_readout(chain, a);
  CHECK((x_readout_state(tau) - via_chain).cwiseAbs().maxCoeff() < 1e-11);
}
