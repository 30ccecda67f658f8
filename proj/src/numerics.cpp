// Copyright 2026 The qtraj Authors
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

#include "qtraj/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

// In-place LU with partial pivoting; returns the row permutation.
std::vector<Eigen::Index> lu_factor(CMatrix& lu) {
  const Eigen::Index n = lu.rows();
  const double scale = norm_inf(lu);
  const double threshold = 1e-14 * scale;
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    double best = std::abs(lu(k, k));
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(lu(i, k)) > best) {
        best = std::abs(lu(i, k));
        pivot = i;
      }
    }
    if (!(best > threshold) || scale == 0.0) {
      throw SingularMatrixError("solve_linear: pivot " + std::to_string(best) +
                                " below threshold " + std::to_string(threshold));
    }
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(pivot)]);
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lu(i, k) /= lu(k, k);
      const Complex factor = lu(i, k);
      for (Eigen::Index j = k + 1; j < n; ++j) lu(i, j) -= factor * lu(k, j);
    }
  }
  return perm;
}

CMatrix lu_solve(const CMatrix& lu, const std::vector<Eigen::Index>& perm, const CMatrix& b) {
  const Eigen::Index n = lu.rows();
  CMatrix x(n, b.cols());
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = b.row(perm[static_cast<std::size_t>(i)]);
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex acc = x(i, c);
      for (Eigen::Index j = 0; j < i; ++j) acc -= lu(i, j) * x(j, c);
      x(i, c) = acc;
    }
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      Complex acc = x(i, c);
      for (Eigen::Index j = i + 1; j < n; ++j) acc -= lu(i, j) * x(j, c);
      x(i, c) = acc / lu(i, i);
    }
  }
  return x;
}

// Padé numerator coefficients (Higham 2005) for degrees 3, 5, 7, 9 and 13.
constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                       25200.0,    1512.0,    56.0,      1.0};
constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                        30270240.0,    2162160.0,    110880.0,     3960.0,
                                        90.0,          1.0};
constexpr std::array<double, 14> kPade13{64764752532480000.0,
                                         32382376266240000.0,
                                         7771770303897600.0,
                                         1187353796428800.0,
                                         129060195264000.0,
                                         10559470521600.0,
                                         670442572800.0,
                                         33522128640.0,
                                         1323241920.0,
                                         40840800.0,
                                         960960.0,
                                         16380.0,
                                         182.0,
                                         1.0};

// Largest 1-norms for which each degree meets double precision.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t K>
void pade_low(const CMatrix& a, const std::array<double, K>& b, CMatrix& u, CMatrix& v) {
  const Eigen::Index n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  CMatrix power = ident;
  CMatrix odd = CMatrix::Zero(n, n);
  CMatrix even = CMatrix::Zero(n, n);
  for (std::size_t k = 0; k < K; k += 2) {
    even += b[k] * power;
    if (k + 1 < K) odd += b[k + 1] * power;
    power = power * a2;
  }
  u = a * odd;
  v = even;
}

void pade13(const CMatrix& a, CMatrix& u, CMatrix& v) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const CMatrix ident = CMatrix::Identity(n, n);
  const CMatrix a2 = a * a;
  const CMatrix a4 = a2 * a2;
  const CMatrix a6 = a4 * a2;
  const CMatrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
      b[0] * ident;
}

}  // namespace

double norm_inf(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
  return best;
}

double norm_one(const CMatrix& m) {
  double best = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
  return best;
}

double hermitian_defect(const CMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const CMatrix& m, double tol) { return hermitian_defect(m) <= tol; }

bool all_finite(const CMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

std::vector<double> hermitian_eigenvalues(const CMatrix& m) {
  require_square(m, "hermitian_eigenvalues");
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

CMatrix unvec(const CVector& v, Eigen::Index rows) {
  if (rows <= 0 || v.size() % rows != 0) throw DimensionError("unvec: length not divisible by rows");
  return Eigen::Map<const CMatrix>(v.data(), rows, v.size() / rows);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix mat_exp(const CMatrix& m, double t) {
  require_square(m, "mat_exp");
  if (!all_finite(m) || !std::isfinite(t)) throw NumericalError("mat_exp: non-finite input");
  const CMatrix a = t * m;
  const double norm = norm_one(a);

  CMatrix u;
  CMatrix v;
  int squarings = 0;
  if (norm <= kTheta3) {
    pade_low(a, kPade3, u, v);
  } else if (norm <= kTheta5) {
    pade_low(a, kPade5, u, v);
  } else if (norm <= kTheta7) {
    pade_low(a, kPade7, u, v);
  } else if (norm <= kTheta9) {
    pade_low(a, kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta13))));
    pade13(a / std::ldexp(1.0, squarings), u, v);
  }

  CMatrix result = solve_linear(CMatrix(v - u), CMatrix(v + u));
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

CVector solve_linear(const CMatrix& m, const CVector& b) {
  require_square(m, "solve_linear");
  if (b.size() != m.rows()) throw DimensionError("solve_linear: right-hand side length mismatch");
  CMatrix lu = m;
  const auto perm = lu_factor(lu);
  return lu_solve(lu, perm, b);
}

CMatrix solve_linear(const CMatrix& m, const CMatrix& b) {
  require_square(m, "solve_linear");
  if (b.rows() != m.rows()) throw DimensionError("solve_linear: right-hand side rows mismatch");
  CMatrix lu = m;
  const auto perm = lu_factor(lu);
  return lu_solve(lu, perm, b);
}

}  // namespace qtraj
