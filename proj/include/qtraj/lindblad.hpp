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

#ifndef QTRAJ_LINDBLAD_HPP
#define QTRAJ_LINDBLAD_HPP

#include "qtraj/model.hpp"
#include "qtraj/numerics.hpp"
#include "qtraj/ode.hpp"

namespace qtraj {

/// Bloch components (<sigma_x>, <sigma_y>, <sigma_z>) of a two-level state.
struct BlochState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// Evolution map Upsilon(t, s) acting on column-stacked operators.
struct Propagator {
  double s = 0.0;
  double t = 0.0;
  CMatrix map;

  CMatrix apply(const CMatrix& rho) const;
};

/// L(t)[rho] = -i[H0 + H_f(t), rho] + sum_k (R_k rho R_k^dagger - 1/2 {R_k^dagger R_k, rho}).
CMatrix liouvillian_apply(const ModelSpec& m, double t, const CMatrix& rho);

/// Matrix of L(t) acting on vec(rho) (column stacking).
CMatrix liouvillian_superop(const ModelSpec& m, double t);

/// Upsilon(t, s)[rho] by adaptive Dormand-Prince integration of the master equation.
///
/// The map is linear, so `rho` may be any dim x dim operator. Throws
/// ArgumentError when t < s.
CMatrix propagate(const ModelSpec& m, double s, double t, const CMatrix& rho,
                  const OdeOptions& opt = {});

Propagator propagator(const ModelSpec& m, double s, double t, const OdeOptions& opt = {});

BlochState bloch_from_density(const CMatrix& rho);
CMatrix density_from_bloch(const BlochState& b);

/// Real 3x3 drift matrix of the rotating-frame Bloch equations.
CMatrix bloch_matrix(const TwoLevelParams& params);

/// Stationary rotating-frame Bloch vector, x_eq = -gamma A^{-1} (0, 0, 1).
CVector bloch_equilibrium(const TwoLevelParams& params);

/// A^{-1}(1 - e^{-A tau}) e_z, with the short-time series near tau = 0.
CVector bloch_source_integral(const CMatrix& a, double tau);

/// Upsilon(t, s)[rho] for the two-level model via the affine Bloch flow.
CMatrix rotating_frame_propagate(const TwoLevelParams& params, double s, double t,
                                 const CMatrix& rho);

/// Lab-frame stationary state at time t (the equilibrium Bloch vector rotated by nu t).
CMatrix equilibrium_state(const TwoLevelParams& params, double t = 0.0);

}  // namespace qtraj

#endif  // QTRAJ_LINDBLAD_HPP
