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

#include "qtraj/model.hpp"

#include <cmath>
#include <string>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace pauli {

CMatrix sigma_minus() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

CMatrix sigma_plus() { return sigma_minus().adjoint(); }

CMatrix sigma_x() { return sigma_minus() + sigma_plus(); }

CMatrix sigma_y() { return kI * (sigma_minus() - sigma_plus()); }

CMatrix sigma_z() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix excited() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

CMatrix ground() {
  CMatrix m = CMatrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

}  // namespace pauli

namespace {

void check_wave(const WaveSpec& w, const std::string& where) {
  if (w.kind == WaveSpec::Kind::zero) return;
  if (!std::isfinite(w.amplitude.real()) || !std::isfinite(w.amplitude.imag()) ||
      !std::isfinite(w.frequency)) {
    throw ParameterError(where + ": wave amplitude and frequency must be finite");
  }
  if (!(w.window_end > 0.0)) throw ParameterError(where + ": window end must be positive");
}

}  // namespace

double wrap_phase(double theta) {
  double wrapped = std::remainder(theta, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

void ModelSpec::validate() const {
  if (dim < 1 || dim > kMaxDim) {
    throw DimensionError("model: dim must be in [1, " + std::to_string(kMaxDim) + "], got " +
                         std::to_string(dim));
  }
  if (H0.rows() != dim || H0.cols() != dim) throw DimensionError("model.H0: must be dim x dim");
  if (!all_finite(H0)) throw ParameterError("model.H0: non-finite entries");
  if (!is_hermitian(H0, 1e-12 * std::max(1.0, norm_inf(H0)))) {
    throw ParameterError("model.H0: must be Hermitian");
  }
  if (channels.empty()) throw DimensionError("model.channels: at least one channel is required");
  for (std::size_t k = 0; k < channels.size(); ++k) {
    const auto where = "model.channels[" + std::to_string(k) + "]";
    if (channels[k].R.rows() != dim || channels[k].R.cols() != dim) {
      throw DimensionError(where + ".R: must be dim x dim");
    }
    if (!all_finite(channels[k].R)) throw ParameterError(where + ".R: non-finite entries");
    check_wave(channels[k].wave, where + ".wave");
  }
  if (!std::isfinite(theta) || theta <= -kPi || theta > kPi) {
    throw ParameterError("model.theta: must lie in (-pi, pi]");
  }
  if (lo.kind != WaveSpec::Kind::monochromatic) {
    throw ParameterError("model.lo: local oscillator must be a monochromatic wave");
  }
  check_wave(lo, "model.lo");
  if (std::abs(std::abs(lo.amplitude) - 1.0) > 1e-12) {
    throw ParameterError("model.lo: local oscillator must have unit modulus");
  }
}

void TwoLevelParams::validate() const {
  auto finite = [](double v, const char* name) {
    if (!std::isfinite(v)) throw ParameterError(std::string("model.") + name + ": must be finite");
  };
  finite(gamma, "gamma");
  finite(p, "p");
  finite(nbar, "nbar");
  finite(kd, "kd");
  finite(Omega, "Omega");
  finite(DeltaNu, "DeltaNu");
  finite(nu, "nu");
  finite(nu_lo, "nu_lo");
  if (!(gamma > 0.0)) throw ParameterError("model.gamma: must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw ParameterError("model.p: must lie in (0, 1)");
  if (nbar < 0.0) throw ParameterError("model.nbar: must be >= 0");
  if (kd < 0.0) throw ParameterError("model.kd: must be >= 0");
  if (Omega < 0.0) throw ParameterError("model.Omega: must be >= 0");
  if (!(nu > 0.0)) throw ParameterError("model.nu: must be > 0");
}

ModelSpec build_two_level_model(const TwoLevelParams& params, Detection detection, double theta,
                                double window_end) {
  params.validate();
  if (detection == Detection::heterodyne && params.nu_lo == params.nu) {
    throw ParameterError("model.nu_lo: heterodyne detection requires nu_lo != nu");
  }
  const double g = params.gamma;
  const CMatrix sm = pauli::sigma_minus();
  const CMatrix sp = pauli::sigma_plus();

  ModelSpec m;
  m.dim = 2;
  m.H0 = 0.5 * params.nu0() * pauli::sigma_z();
  m.theta = wrap_phase(theta);

  const double loss = std::sqrt(g * (1.0 - params.p));
  const Complex drive = kI * params.Omega / (2.0 * loss);

  m.channels.push_back({std::sqrt(g * params.p) * sm, WaveSpec::zero()});
  m.channels.push_back({loss * sm, WaveSpec::monochromatic(drive, params.nu, window_end)});
  m.channels.push_back({std::sqrt(g * params.nbar) * sm, WaveSpec::zero()});
  m.channels.push_back({std::sqrt(g * params.nbar) * sp, WaveSpec::zero()});
  m.channels.push_back({std::sqrt(g * params.kd) * pauli::sigma_z(), WaveSpec::zero()});

  // The -i phase of the homodyne oscillator is carried by theta.
  const double lo_frequency = detection == Detection::homodyne ? params.nu : params.nu_lo;
  m.lo = WaveSpec::monochromatic({1.0, 0.0}, lo_frequency, window_end);
  return m;
}

CMatrix effective_drift_K(const ModelSpec& m) {
  CMatrix k = -kI * m.H0;
  for (const auto& ch : m.channels) k -= 0.5 * ch.R.adjoint() * ch.R;
  return k;
}

CMatrix hamiltonian_drive_Hf(const ModelSpec& m, double t) {
  CMatrix h = CMatrix::Zero(m.dim, m.dim);
  for (const auto& ch : m.channels) {
    const Complex f = ch.wave(t);
    if (f == Complex{0.0, 0.0}) continue;
    h += kI * (std::conj(f) * ch.R - f * ch.R.adjoint());
  }
  return h;
}

Complex observed_phase(const ModelSpec& m, double t) {
  return std::polar(1.0, m.theta) * std::conj(m.lo(t));
}

CMatrix observed_operator(const ModelSpec& m, double t) {
  const auto& ch = m.channels.front();
  return observed_phase(m, t) *
         (ch.R + ch.wave(t) * CMatrix::Identity(m.dim, m.dim));
}

}  // namespace qtraj
