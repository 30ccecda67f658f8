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

#ifndef QTRAJ_NUMERICS_HPP
#define QTRAJ_NUMERICS_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

/**
 * \file
 * \brief Small dense complex linear algebra shared by every other module.
 *
 * System operators are at most 4x4 and vectorized superoperators at most
 * 16x16, so everything here is dense and allocation-light.
 */

namespace qtraj {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Returns exp(t * m) by Padé scaling-and-squaring.
///
/// Throws DimensionError for non-square input and NumericalError for
/// non-finite input.
CMatrix mat_exp(const CMatrix& m, double t = 1.0);

/// Solves m * x = b with LU and partial pivoting.
///
/// Throws SingularMatrixError when a pivot falls below 1e-14 * ||m||_inf.
CVector solve_linear(const CMatrix& m, const CVector& b);

/// Multiple right-hand-side version of solve_linear.
CMatrix solve_linear(const CMatrix& m, const CMatrix& b);

/// Infinity norm (maximum absolute row sum).
double norm_inf(const CMatrix& m);

/// One norm (maximum absolute column sum).
double norm_one(const CMatrix& m);

/// Largest entry of |m - m^dagger|.
double hermitian_defect(const CMatrix& m);

bool is_hermitian(const CMatrix& m, double tol = 1e-12);

bool all_finite(const CMatrix& m);

/// Ascending eigenvalues of the Hermitian part of m.
std::vector<double> hermitian_eigenvalues(const CMatrix& m);

/// Column-stacking vectorization, vec(A X B) = (B^T kron A) vec(X).
CVector vec(const CMatrix& m);
CMatrix unvec(const CVector& v, Eigen::Index rows);

/// Kronecker product.
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace qtraj

#endif  // QTRAJ_NUMERICS_HPP
