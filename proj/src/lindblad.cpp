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

#include "qtraj/lindblad.hpp"

#include <cmath>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

void require_operator(const ModelSpec& m, const CMatrix& rho, const char* what) {
  if (rho.rows() != m.dim || rho.cols() != m.dim) {
    throw DimensionError(std::string(what) + ": operator must be dim x dim");
  }
}

// Time-independent part of the vectorized Liouvillian.
CMatrix static_superop(const ModelSpec& m) {
  const Eigen::Index n = m.dim;
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix l = -kI * (kron(id, m.H0) - kron(m.H0.transpose(), id));
  for (const auto& ch : m.channels) {
    const CMatrix rdr = ch.R.adjoint() * ch.R;
    l += kron(ch.R.conjugate(), ch.R) - 0.5 * kron(id, rdr) - 0.5 * kron(rdr.transpose(), id);
  }
  return l;
}

bool has_drive(const ModelSpec& m) {
  for (const auto& ch : m.channels) {
    if (!ch.wave.is_zero()) return true;
  }
  return false;
}

// Rotation e^{-i a sigma_z / 2}.
CMatrix z_rotation(double a) {
  CMatrix u = CMatrix::Zero(2, 2);
  u(0, 0) = std::polar(1.0, -0.5 * a);
  u(1, 1) = std::polar(1.0, 0.5 * a);
  return u;
}

}  // namespace

double BlochState::norm() const { return std::sqrt(x * x + y * y + z * z); }

CMatrix Propagator::apply(const CMatrix& rho) const {
  return unvec(map * vec(rho), rho.rows());
}

CMatrix liouvillian_apply(const ModelSpec& m, double t, const CMatrix& rho) {
  require_operator(m, rho, "liouvillian_apply");
  const CMatrix h = m.H0 + hamiltonian_drive_Hf(m, t);
  CMatrix out = -kI * (h * rho - rho * h);
  for (const auto& ch : m.channels) {
    const CMatrix rdr = ch.R.adjoint() * ch.R;
    out += ch.R * rho * ch.R.adjoint() - 0.5 * (rdr * rho + rho * rdr);
  }
  return out;
}

CMatrix liouvillian_superop(const ModelSpec& m, double t) {
  const Eigen::Index n = m.dim;
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix hf = hamiltonian_drive_Hf(m, t);
  return static_superop(m) - kI * (kron(id, hf) - kron(hf.transpose(), id));
}

CMatrix propagate(const ModelSpec& m, double s, double t, const CMatrix& rho,
                  const OdeOptions& opt) {
  require_operator(m, rho, "propagate");
  if (t < s) throw ArgumentError("propagate: requires t >= s");
  if (t == s) return rho;

  const Eigen::Index n = m.dim;
  const CMatrix l0 = static_superop(m);
  const bool driven = has_drive(m);
  auto rhs = [&](double time, const CVector& y, CVector& dy) {
    dy.noalias() = l0 * y;
    if (driven) {
      const CMatrix hf = hamiltonian_drive_Hf(m, time);
      const auto r = Eigen::Map<const CMatrix>(y.data(), n, n);
      const CMatrix c = -kI * (hf * r - r * hf);
      dy += Eigen::Map<const CVector>(c.data(), n * n);
    }
  };
  return unvec(integrate_dopri5(rhs, s, t, vec(rho), opt), n);
}

Propagator propagator(const ModelSpec& m, double s, double t, const OdeOptions& opt) {
  if (t < s) throw ArgumentError("propagator: requires t >= s");
  const Eigen::Index n = m.dim;
  const Eigen::Index nn = n * n;
  Propagator out{s, t, CMatrix::Identity(nn, nn)};
  if (t == s) return out;

  const CMatrix l0 = static_superop(m);
  const bool driven = has_drive(m);
  const CMatrix id = CMatrix::Identity(n, n);
  auto rhs = [&](double time, const CVector& y, CVector& dy) {
    const auto u = Eigen::Map<const CMatrix>(y.data(), nn, nn);
    CMatrix l = l0;
    if (driven) {
      const CMatrix hf = hamiltonian_drive_Hf(m, time);
      l -= kI * (kron(id, hf) - kron(hf.transpose(), id));
    }
    const CMatrix du = l * u;
    dy = Eigen::Map<const CVector>(du.data(), nn * nn);
  };
  out.map = unvec(integrate_dopri5(rhs, s, t, vec(out.map), opt), nn);
  return out;
}

BlochState bloch_from_density(const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionError("bloch_from_density: needs 2x2");
  return {(pauli::sigma_x() * rho).trace().real(), (pauli::sigma_y() * rho).trace().real(),
          (pauli::sigma_z() * rho).trace().real()};
}

CMatrix density_from_bloch(const BlochState& b) {
  return 0.5 * (CMatrix::Identity(2, 2) + b.x * pauli::sigma_x() + b.y * pauli::sigma_y() +
                b.z * pauli::sigma_z());
}

CMatrix bloch_matrix(const TwoLevelParams& params) {
  const double a = params.gamma * (0.5 + params.nbar + 2.0 * params.kd);
  const double c = params.gamma * (1.0 + 2.0 * params.nbar);
  CMatrix m = CMatrix::Zero(3, 3);
  m(0, 0) = a;
  m(0, 1) = params.DeltaNu;
  m(1, 0) = -params.DeltaNu;
  m(1, 1) = a;
  m(1, 2) = params.Omega;
  m(2, 1) = -params.Omega;
  m(2, 2) = c;
  return m;
}

CVector bloch_equilibrium(const TwoLevelParams& params) {
  CVector ez = CVector::Zero(3);
  ez(2) = -params.gamma;
  CVector x = solve_linear(bloch_matrix(params), ez);
  for (auto& v : x) v = Complex{v.real(), 0.0};
  return x;
}

CVector bloch_source_integral(const CMatrix& a, double tau) {
  CVector ez = CVector::Zero(3);
  ez(2) = 1.0;
  if (tau * norm_inf(a) < 1e-4) {
    // integral_0^tau e^{-A u} du truncated after the cubic term
    const CMatrix id = CMatrix::Identity(3, 3);
    const CMatrix series = tau * id - a * (tau * tau / 2.0) + a * a * (tau * tau * tau / 6.0);
    return series * ez;
  }
  const CMatrix decay = mat_exp(a, -tau);
  return solve_linear(a, CVector((CMatrix::Identity(3, 3) - decay) * ez));
}

CMatrix rotating_frame_propagate(const TwoLevelParams& params, double s, double t,
                                 const CMatrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) {
    throw DimensionError("rotating_frame_propagate: needs a 2x2 operator");
  }
  if (t < s) throw ArgumentError("rotating_frame_propagate: requires t >= s");
  if (t == s) return rho;

  // into the frame rotating at nu
  const CMatrix us = z_rotation(params.nu * s);
  const CMatrix rotated = us.adjoint() * rho * us;

  // complex Bloch components keep the map linear on non-Hermitian input
  const Complex tr = rotated.trace();
  CVector x0(3);
  x0(0) = (pauli::sigma_x() * rotated).trace();
  x0(1) = (pauli::sigma_y() * rotated).trace();
  x0(2) = (pauli::sigma_z() * rotated).trace();

  const double tau = t - s;
  const CMatrix a = bloch_matrix(params);
  const CVector xt = mat_exp(a, -tau) * x0 - params.gamma * tr * bloch_source_integral(a, tau);

  const CMatrix evolved = 0.5 * (tr * CMatrix::Identity(2, 2) + xt(0) * pauli::sigma_x() +
                                 xt(1) * pauli::sigma_y() + xt(2) * pauli::sigma_z());
  const CMatrix ut = z_rotation(params.nu * t);
  return ut * evolved * ut.adjoint();
}

CMatrix equilibrium_state(const TwoLevelParams& params, double t) {
  const CVector x = bloch_equilibrium(params);
  const CMatrix rot = density_from_bloch({x(0).real(), x(1).real(), x(2).real()});
  const CMatrix ut = z_rotation(params.nu * t);
  return ut * rot * ut.adjoint();
}

}  // namespace qtraj
