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

#include "vdme/linalg.hpp"

#include <cstdlib>
#include <stdexcept>

namespace vdme {

int max_dim() {
  static const int cached = [] {
    const char* env = std::getenv("VDME_MAX_DIM");
    if (env != nullptr) {
      const long v = std::strtol(env, nullptr, 10);
      if (v > 0) return static_cast<int>(v);
    }
    return 64;
  }();
  return cached;
}

bool is_hermitian(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const CMat& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const CMat id = CMat::Identity(m.rows(), m.cols());
  return (m.adjoint() * m - id).cwiseAbs().maxCoeff() <= tol;
}

static void check_finite(const CMat& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite entries");
  }
}

DensityMatrix make_density(const CMat& m) {
  check_finite(m, "make_density");
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("make_density: matrix must be square");
  }
  if (!is_hermitian(m, 1e-12)) {
    throw std::invalid_argument("make_density: matrix not Hermitian");
  }
  if (std::abs(m.trace() - Cx(1.0, 0.0)) > 1e-12) {
    throw std::invalid_argument("make_density: trace must be 1");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw std::invalid_argument("make_density: negative eigenvalue");
  }
  return DensityMatrix{m};
}

Observable make_observable(const CMat& m) {
  check_finite(m, "make_observable");
  if (!is_hermitian(m, 1e-12)) {
    throw std::invalid_argument("make_observable: matrix not Hermitian");
  }
  return Observable{m};
}

CMat tensor(const CMat& a, const CMat& b) {
  const long rows = a.rows() * b.rows();
  const long cols = a.cols() * b.cols();
  if (rows > max_dim() || cols > max_dim()) {
    throw std::invalid_argument("tensor: dimension exceeds VDME_MAX_DIM");
  }
  CMat out(rows, cols);
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMat partial_trace(const CMat& m, const std::vector<int>& dims, int keep) {
  long total = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("partial_trace: bad factor dim");
    total *= d;
  }
  if (m.rows() != total || m.cols() != total) {
    throw std::invalid_argument("partial_trace: dims do not match matrix");
  }
  if (keep < 0 || keep >= static_cast<int>(dims.size())) {
    throw std::invalid_argument("partial_trace: keep index out of range");
  }
  const int dk = dims[keep];
  // strides of the kept factor and the product of traced factors
  long right = 1;
  for (std::size_t f = keep + 1; f < dims.size(); ++f) right *= dims[f];
  long left = total / (right * dk);

  CMat out = CMat::Zero(dk, dk);
  for (long l = 0; l < left; ++l) {
    for (long r = 0; r < right; ++r) {
      for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
          const long row = (l * dk + i) * right + r;
          const long col = (l * dk + j) * right + r;
          out(i, j) += m(row, col);
        }
      }
    }
  }
  return out;
}

CMat herm_func(const CMat& h, const std::function<Cx(double)>& f) {
  if (!is_hermitian(h, 1e-10)) {
    throw std::invalid_argument("herm_func: matrix not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(h);
  const Eigen::VectorXd evals = es.eigenvalues();
  CVec fe(evals.size());
  for (long i = 0; i < evals.size(); ++i) fe(i) = f(evals(i));
  return es.eigenvectors() * fe.asDiagonal() * es.eigenvectors().adjoint();
}

CMat herm_exp(const CMat& h, double t) {
  return herm_func(h, [t](double x) {
    return std::exp(Cx(0.0, -t * x));
  });
}

CMat swap_operator(int d) {
  if (d <= 0) throw std::invalid_argument("swap_operator: d must be positive");
  CMat s = CMat::Zero(static_cast<long>(d) * d, static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      s(static_cast<long>(i) * d + j, static_cast<long>(j) * d + i) = 1.0;
    }
  }
  return s;
}

double op_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

double trace_norm(const CMat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues().sum();
}

CVec random_pure_vector(int d, Rng& rng) {
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = Cx(rng.normal(), rng.normal());
  const double n = v.norm();
  if (n == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / n;
}

CMat random_unitary(int d, Rng& rng) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Cx(rng.normal(), rng.normal());
  }
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  const CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix phases so the distribution is Haar
  for (int j = 0; j < d; ++j) {
    const Cx rj = r(j, j);
    const double a = std::abs(rj);
    q.col(j) *= (a > 0.0) ? (rj / a) : Cx(1.0, 0.0);
  }
  return q;
}

CMat random_hermitian(int d, Rng& rng, double norm) {
  CMat g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = Cx(rng.normal(), rng.normal());
  }
  CMat h = 0.5 * (g + g.adjoint());
  const double n = op_norm(h);
  if (n > 0.0) h *= (norm / n);
  return h;
}

DensityMatrix random_state(int d, StateKind kind, std::uint64_t seed,
                           const std::vector<double>& spectrum) {
  if (d <= 0) throw std::invalid_argument("random_state: d must be positive");
  Rng rng(seed, 0);
  CMat rho;
  switch (kind) {
    case StateKind::pure: {
      const CVec v = random_pure_vector(d, rng);
      rho = v * v.adjoint();
      break;
    }
    case StateKind::mixed: {
      CMat g(d, d);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) g(i, j) = Cx(rng.normal(), rng.normal());
      }
      rho = g * g.adjoint();
      rho /= rho.trace();
      break;
    }
    case StateKind::spectrum: {
      if (static_cast<int>(spectrum.size()) != d) {
        throw std::invalid_argument("random_state: spectrum size != d");
      }
      double sum = 0.0;
      for (double p : spectrum) {
        if (p < -1e-12) {
          throw std::invalid_argument("random_state: negative spectrum entry");
        }
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("random_state: spectrum must sum to 1");
      }
      const CMat u = random_unitary(d, rng);
      Eigen::VectorXd lam(d);
      for (int i = 0; i < d; ++i) lam(i) = std::max(0.0, spectrum[i]);
      rho = u * lam.asDiagonal() * u.adjoint();
      break;
    }
  }
  // enforce exact Hermiticity against accumulated roundoff
  rho = Cx(0.5, 0.0) * (rho + rho.adjoint());
  rho /= rho.trace();
  return DensityMatrix{rho};
}

CVec vec(const CMat& a) {
  CVec v(a.size());
  long idx = 0;
  for (long j = 0; j < a.cols(); ++j) {
    for (long i = 0; i < a.rows(); ++i) v(idx++) = a(i, j);
  }
  return v;
}

CMat unvec(const CVec& v, int rows, int cols) {
  if (v.size() != static_cast<long>(rows) * cols) {
    throw std::invalid_argument("unvec: size mismatch");
  }
  CMat a(rows, cols);
  long idx = 0;
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) a(i, j) = v(idx++);
  }
  return a;
}

}  // namespace vdme
