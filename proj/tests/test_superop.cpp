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

#include "vdme/superop.hpp"

using namespace vdme;

namespace {

CMat random_op(int d, Rng& rng) {
  CMat m(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) m(i, j) = Cx(rng.normal(), rng.normal());
  return m;
}

}  // namespace

TEST_CASE("apply matches direct matrix conjugation for unitary channels") {
  Rng rng(20, 0);
  const CMat u = random_unitary(3, rng);
  const SuperOp ch = unitary_channel(u);
  const CMat a = random_op(3, rng);
  CHECK((ch.apply(a) - u * a * u.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS_AS(unitary_channel(0.5 * u), std::invalid_argument);
}

TEST_CASE("asymmetric_map applies L on the left and R^dag on the right") {
  Rng rng(21, 0);
  const CMat l = random_op(3, rng), r = random_op(3, rng),
             a = random_op(3, rng);
  const SuperOp phi = asymmetric_map(l, r);
  CHECK((phi.apply(a) - l * a * r.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("compose add subtract scale act pointwise on maps") {
  Rng rng(22, 0);
  const CMat u = random_unitary(2, rng), v = random_unitary(2, rng);
  const SuperOp cu = unitary_channel(u), cv = unitary_channel(v);
  const CMat a = random_op(2, rng);

  CHECK((compose(cu, cv).apply(a) - u * v * a * (u * v).adjoint())
            .cwiseAbs()
            .maxCoeff() < 1e-12);
  CHECK((add(cu, cv).apply(a) - (cu.apply(a) + cv.apply(a)))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK((subtract(cu, cv).apply(a) - (cu.apply(a) - cv.apply(a)))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK((scale(cu, Cx(0, 2)).apply(a) - Cx(0, 2) * cu.apply(a))
            .cwiseAbs()
            .maxCoeff() < 1e-13);
  CHECK((identity_superop(2).apply(a) - a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("partial_swap_factor equals its closed form on both sides") {
  Rng rng(23, 0);
  const DensityMatrix rho = random_state(3, StateKind::mixed, rng.next_u64());
  const CMat a = random_op(3, rng);
  const double delta = 0.37;
  const CMat i3 = CMat::Identity(3, 3);
  const CMat w_minus = std::cos(delta) * i3 - Cx(0, 1) * std::sin(delta) * rho.mat;
  const CMat w_plus = std::cos(delta) * i3 + Cx(0, 1) * std::sin(delta) * rho.mat;

  const SuperOp left2 = partial_swap_factor(delta, 2, rho, Side::left);
  CHECK((left2.apply(a) - w_minus * w_minus * a).cwiseAbs().maxCoeff() < 1e-12);
  const SuperOp right3 = partial_swap_factor(delta, 3, rho, Side::right);
  CHECK((right3.apply(a) - a * w_plus * w_plus * w_plus).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("embed_left tensors a map with an idle identity factor") {
  Rng rng(24, 0);
  const CMat u = random_unitary(2, rng);
  const SuperOp emb = embed_left(unitary_channel(u), 3);
  REQUIRE(emb.dim_in == 6);
  const CMat a = random_op(6, rng);
  const CMat big_u = tensor(u, CMat::Identity(3, 3));
  CHECK((emb.apply(a) - big_u * a * big_u.adjoint()).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("attach_state and ptrace_superop are mutually inverse") {
  Rng rng(25, 0);
  const DensityMatrix sigma = random_state(3, StateKind::mixed, rng.next_u64());
  const SuperOp att = attach_state(sigma, 2);
  const CMat a = random_op(2, rng);
  CHECK((att.apply(a) - tensor(a, sigma.mat)).cwiseAbs().maxCoeff() < 1e-12);

  const SuperOp tr = ptrace_superop({2, 3}, 0);
  CHECK((compose(tr, att).apply(a) - a).cwiseAbs().maxCoeff() < 1e-12);

  const CMat big = random_op(6, rng);
  CHECK((tr.apply(big) - partial_trace(big, {2, 3}, 0)).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("choi matrix distinguishes CP from HP-only maps") {
  Rng rng(26, 0);
  const CMat u = random_unitary(3, rng);
  const ChoiMatrix ju = choi(unitary_channel(u));
  CHECK(choi_hermitian(ju));
  CHECK(choi_min_eigenvalue(ju) > -1e-12);
  CHECK((choi_reduction(ju) - CMat::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-11);

  // HP but not CP: A -> L A L^dag - A with L unitary; Choi has negative part
  const SuperOp hp = subtract(unitary_channel(u), identity_superop(3));
  const ChoiMatrix jhp = choi(hp);
  CHECK(choi_hermitian(jhp));
  CHECK(choi_min_eigenvalue(jhp) < -0.1);

  // not HP: A -> L A R^dag with L != R
  const SuperOp nhp = asymmetric_map(u, random_unitary(3, rng));
  CHECK_FALSE(choi_hermitian(choi(nhp)));
}

TEST_CASE("choi entries follow the declared index convention") {
  // amplitude damping on one qubit, gamma = 1: Phi(|1><1|) = |0><0|
  CMat k0(2, 2), k1(2, 2);
  k0 << 1, 0, 0, 0;
  k1 << 0, 1, 0, 0;
  const SuperOp damp = add(asymmetric_map(k0, k0), asymmetric_map(k1, k1));
  const ChoiMatrix j = choi(damp);
  // J_{(i,k),(j,l)} = Phi(E_ij)_{kl}; Phi(E_11) = E_00
  CHECK(std::abs(j.mat(1 * 2 + 0, 1 * 2 + 0) - Cx(1, 0)) < 1e-14);
  CHECK(std::abs(j.mat(1 * 2 + 1, 1 * 2 + 1)) < 1e-14);
  // every entry agrees with apply() on matrix units
  for (int i = 0; i < 2; ++i)
    for (int jj = 0; jj < 2; ++jj) {
      CMat unit = CMat::Zero(2, 2);
      unit(i, jj) = 1.0;
      const CMat img = damp.apply(unit);
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l)
          CHECK(std::abs(j.mat(i * 2 + k, jj * 2 + l) - img(k, l)) < 1e-14);
    }
}

TEST_CASE("diamond_bounds sandwich known channel distances") {
  Rng rng(27, 0);
  const int d = 3;
  const SuperOp id = identity_superop(d);

  // identical maps: zero distance
  const auto same = diamond_bounds(id, id);
  CHECK(same.first == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(same.second == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(same.first <= same.second);

  // global phase difference is invisible to channels
  const auto phase = diamond_bounds(
      unitary_channel(std::polar(1.0, 0.4) * CMat::Identity(d, d)), id);
  CHECK(phase.second < 1e-12);

  // orthogonal unitaries: J difference has trace norm 2d, so upper = 2d,
  // lower = 2; true diamond distance is 2
  CMat perm = CMat::Zero(d, d);
  perm(0, 1) = 1;
  perm(1, 2) = 1;
  perm(2, 0) = 1;
  const auto far = diamond_bounds(unitary_channel(perm), id);
  CHECK(far.first <= far.second);
  CHECK(far.first == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(far.second == doctest::Approx(2.0 * d).epsilon(1e-10));
}

TEST_CASE("diamond_bounds scales linearly in a map difference") {
  Rng rng(28, 0);
  const SuperOp a = unitary_channel(random_unitary(2, rng));
  const SuperOp b = unitary_channel(random_unitary(2, rng));
  const auto base = diamond_bounds(a, b);
  const SuperOp mid = add(scale(a, 0.5), scale(b, 0.5));
  const auto half = diamond_bounds(a, mid);
  CHECK(half.second == doctest::Approx(0.5 * base.second).epsilon(1e-10));
}

TEST_CASE("conjugation_error_bound dominates the measured choi distance") {
  Rng rng(29, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(3));
    const CMat u = random_unitary(d, rng);
    CMat a = u;
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i)
        a(i, j) += 1e-3 * Cx(rng.normal(), rng.normal());
    const double bound = conjugation_error_bound(a, u);
    const double measured =
        diamond_bounds(asymmetric_map(a, a), unitary_channel(u)).second;
    CHECK(measured <= d * bound + 1e-12);
    CHECK(unitary_error(a, u) == doctest::Approx(op_norm(a - u)).epsilon(1e-12));
  }
}
