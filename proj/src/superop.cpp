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

#include "vdme/superop.hpp"

#include <stdexcept>

namespace vdme {

// kron for superoperator assembly; not routed through tensor() because the
// max_dim guard applies to operator dimensions, not d^2 map matrices
static CMat kron_unguarded(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat SuperOp::apply(const CMat& a) const {
  if (a.rows() != dim_in || a.cols() != dim_in) {
    throw std::invalid_argument("SuperOp::apply: operand dimension mismatch");
  }
  return unvec(mat * vec(a), dim_out, dim_out);
}

SuperOp make_superop(const CMat& mat, int dim_in, int dim_out) {
  if (mat.rows() != static_cast<long>(dim_out) * dim_out ||
      mat.cols() != static_cast<long>(dim_in) * dim_in) {
    throw std::invalid_argument("make_superop: matrix shape mismatch");
  }
  if (!mat.allFinite()) {
    throw std::invalid_argument("make_superop: non-finite entries");
  }
  return SuperOp{mat, dim_in, dim_out};
}

SuperOp identity_superop(int d) {
  return SuperOp{CMat::Identity(static_cast<long>(d) * d,
                                static_cast<long>(d) * d),
                 d, d};
}

SuperOp compose(const SuperOp& a, const SuperOp& b) {
  if (a.dim_in != b.dim_out) {
    throw std::invalid_argument("compose: dimension chain mismatch");
  }
  return SuperOp{a.mat * b.mat, b.dim_in, a.dim_out};
}

SuperOp add(const SuperOp& a, const SuperOp& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw std::invalid_argument("add: dimension mismatch");
  }
  return SuperOp{a.mat + b.mat, a.dim_in, a.dim_out};
}

SuperOp subtract(const SuperOp& a, const SuperOp& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out) {
    throw std::invalid_argument("subtract: dimension mismatch");
  }
  return SuperOp{a.mat - b.mat, a.dim_in, a.dim_out};
}

SuperOp scale(const SuperOp& a, Cx c) { return SuperOp{c * a.mat, a.dim_in, a.dim_out}; }

SuperOp asymmetric_map(const CMat& l, const CMat& r) {
  if (l.rows() != r.rows() || l.cols() != r.cols()) {
    throw std::invalid_argument("asymmetric_map: factor shape mismatch");
  }
  // vec(L A R^dag) = (conj(R) (x) L) vec(A)
  return SuperOp{kron_unguarded(r.conjugate(), l),
                 static_cast<int>(l.cols()), static_cast<int>(l.rows())};
}

SuperOp unitary_channel(const CMat& u, double tol) {
  if (!is_unitary(u, tol)) {
    throw std::invalid_argument("unitary_channel: matrix not unitary");
  }
  return asymmetric_map(u, u);
}

SuperOp partial_swap_factor(double delta, int k, const DensityMatrix& rho,
                            Side side) {
  if (k < 0) throw std::invalid_argument("partial_swap_factor: k < 0");
  const int d = rho.dim();
  const CMat id = CMat::Identity(d, d);
  CMat factor = id;
  const CMat step = std::cos(delta) * id -
                    Cx(0.0, 1.0) * std::sin(delta) * rho.mat;
  for (int i = 0; i < k; ++i) factor = step * factor;
  // right side multiplies by the adjoint factor: A (cos I + i sin rho)^k
  return (side == Side::left) ? asymmetric_map(factor, id)
                              : asymmetric_map(id, factor);
}

SuperOp embed_left(const SuperOp& phi, int d_idle) {
  if (d_idle <= 0) throw std::invalid_argument("embed_left: bad idle dim");
  const int din = phi.dim_in, dout = phi.dim_out;
  const long big_in = static_cast<long>(din) * d_idle;
  const long big_out = static_cast<long>(dout) * d_idle;
  CMat out = CMat::Zero(big_out * big_out, big_in * big_in);
  CMat unit = CMat::Zero(din, din);
  for (int is = 0; is < din; ++is) {
    for (int js = 0; js < din; ++js) {
      unit(is, js) = 1.0;
      const CMat img = phi.apply(unit);
      unit(is, js) = 0.0;
      for (int ii = 0; ii < d_idle; ++ii) {
        for (int ji = 0; ji < d_idle; ++ji) {
          const long col = (static_cast<long>(js) * d_idle + ji) * big_in +
                           (static_cast<long>(is) * d_idle + ii);
          for (int ks = 0; ks < dout; ++ks) {
            for (int ls = 0; ls < dout; ++ls) {
              const long row =
                  (static_cast<long>(ls) * d_idle + ji) * big_out +
                  (static_cast<long>(ks) * d_idle + ii);
              out(row, col) = img(ks, ls);
            }
          }
        }
      }
    }
  }
  return SuperOp{out, static_cast<int>(big_in), static_cast<int>(big_out)};
}

SuperOp attach_state(const DensityMatrix& sigma, int d) {
  const int ds = sigma.dim();
  const long big = static_cast<long>(d) * ds;
  CMat out = CMat::Zero(big * big, static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      const long col = static_cast<long>(j) * d + i;
      for (int k = 0; k < ds; ++k) {
        for (int l = 0; l < ds; ++l) {
          const long row = (static_cast<long>(j) * ds + l) * big +
                           (static_cast<long>(i) * ds + k);
          out(row, col) = sigma.mat(k, l);
        }
      }
    }
  }
  return SuperOp{out, d, static_cast<int>(big)};
}

SuperOp ptrace_superop(const std::vector<int>& dims, int keep) {
  long total = 1;
  for (int d : dims) total *= d;
  const int dk = dims.at(keep);
  long right = 1;
  for (std::size_t f = keep + 1; f < dims.size(); ++f) right *= dims[f];
  const long left = total / (right * dk);
  CMat out = CMat::Zero(static_cast<long>(dk) * dk, total * total);
  for (long l = 0; l < left; ++l) {
    for (long r = 0; r < right; ++r) {
      for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
          const long rowfull = (l * dk + i) * right + r;
          const long colfull = (l * dk + j) * right + r;
          out(static_cast<long>(j) * dk + i, colfull * total + rowfull) += 1.0;
        }
      }
    }
  }
  return SuperOp{out, static_cast<int>(total), dk};
}

ChoiMatrix choi(const SuperOp& phi) {
  if (phi.dim_in != phi.dim_out) {
    throw std::invalid_argument("choi: map must be square");
  }
  const int d = phi.dim_in;
  CMat j = CMat::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
  CMat unit = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int jj = 0; jj < d; ++jj) {
      unit(i, jj) = 1.0;
      const CMat img = phi.apply(unit);
      unit(i, jj) = 0.0;
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          j(static_cast<long>(i) * d + k, static_cast<long>(jj) * d + l) =
              img(k, l);
        }
      }
    }
  }
  return ChoiMatrix{j, d};
}

bool choi_hermitian(const ChoiMatrix& j, double tol) {
  return is_hermitian(j.mat, tol);
}

double choi_min_eigenvalue(const ChoiMatrix& j) {
  const CMat h = 0.5 * (j.mat + j.mat.adjoint());
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

CMat choi_reduction(const ChoiMatrix& j) {
  const int d = j.d;
  CMat out = CMat::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int jj = 0; jj < d; ++jj) {
      for (int k = 0; k < d; ++k) {
        out(i, jj) += j.mat(static_cast<long>(i) * d + k,
                            static_cast<long>(jj) * d + k);
      }
    }
  }
  return out;
}

std::pair<double, double> diamond_bounds(const SuperOp& a, const SuperOp& b) {
  if (a.dim_in != b.dim_in || a.dim_out != b.dim_out ||
      a.dim_in != a.dim_out) {
    throw std::invalid_argument("diamond_bounds: maps must be square & equal");
  }
  const SuperOp diff = subtract(a, b);
  const ChoiMatrix j = choi(diff);
  const double t1 = trace_norm(j.mat);
  return {t1 / a.dim_in, t1};
}

double unitary_error(const CMat& approx, const CMat& target) {
  if (approx.rows() != target.rows() || approx.cols() != target.cols()) {
    throw std::invalid_argument("unitary_error: shape mismatch");
  }
  return op_norm(approx - target);
}

double conjugation_error_bound(const CMat& a, const CMat& u) {
  return op_norm(a - u) * (1.0 + op_norm(a));
}

}  // namespace vdme
