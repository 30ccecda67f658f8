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

#ifndef QTRAJ_MODEL_HPP
#define QTRAJ_MODEL_HPP

#include <limits>
#include <vector>

#include "qtraj/numerics.hpp"

namespace qtraj {

inline constexpr double kInfiniteHorizon = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

/// A coherent wave a * exp(-i w t) switched on over [0, window_end], or nothing.
struct WaveSpec {
  enum class Kind { zero, monochromatic };

  Kind kind = Kind::zero;
  Complex amplitude{0.0, 0.0};
  double frequency = 0.0;
  double window_end = kInfiniteHorizon;

  static WaveSpec zero() { return {}; }
  static WaveSpec monochromatic(Complex amplitude, double frequency,
                                double window_end = kInfiniteHorizon) {
    return {Kind::monochromatic, amplitude, frequency, window_end};
  }

  bool is_zero() const { return kind == Kind::zero || amplitude == Complex{0.0, 0.0}; }

  Complex operator()(double t) const {
    if (kind == Kind::zero || t < 0.0 || t > window_end) return {0.0, 0.0};
    return amplitude * std::polar(1.0, -frequency * t);
  }
};

/// One coupling channel: operator R_k and the coherent wave f_k it is driven with.
struct Channel {
  CMatrix R;
  WaveSpec wave;
};

/**
 * Declarative description of the monitored open system.
 *
 * Channel 0 is the observed one; its quadrature is read with phase `theta`
 * against the local oscillator `lo` (unit modulus where nonzero).
 */
struct ModelSpec {
  int dim = 0;
  CMatrix H0;
  std::vector<Channel> channels;
  double theta = 0.0;
  WaveSpec lo = WaveSpec::monochromatic({1.0, 0.0}, 0.0);

  /// Throws DimensionError or ParameterError when an invariant is violated.
  void validate() const;
};

/// Physical parameters of the driven two-level atom (rates in units of 1/time).
struct TwoLevelParams {
  double gamma = 1.0;
  double p = 0.5;
  double nbar = 0.0;
  double kd = 0.0;
  double Omega = 0.0;
  double DeltaNu = 0.0;
  double nu = 1.0;
  double nu_lo = 0.0;

  double nu0() const { return nu + DeltaNu; }

  /// Throws ParameterError naming the offending field.
  void validate() const;
};

enum class Detection { homodyne, heterodyne };

/// Largest system dimension the library handles.
inline constexpr int kMaxDim = 4;

/// Two-level operators in the basis (|e>, |g>).
namespace pauli {
CMatrix sigma_minus();
CMatrix sigma_plus();
CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
CMatrix excited();
CMatrix ground();
}  // namespace pauli

ModelSpec build_two_level_model(const TwoLevelParams& params, Detection detection,
                                double theta = 0.0, double window_end = kInfiniteHorizon);

/// K = -i H0 - 1/2 sum_k R_k^dagger R_k.
CMatrix effective_drift_K(const ModelSpec& m);

/// H_f(t) = i sum_k (conj(f_k) R_k - f_k R_k^dagger).
CMatrix hamiltonian_drive_Hf(const ModelSpec& m, double t);

/// Phase e^{i theta} conj(h(t)) multiplying the observed channel.
Complex observed_phase(const ModelSpec& m, double t);

/// Z(t) = e^{i theta} conj(h(t)) (R_1 + f_1(t)).
CMatrix observed_operator(const ModelSpec& m, double t);

/// Wraps a phase into (-pi, pi].
double wrap_phase(double theta);

}  // namespace qtraj

#endif  // QTRAJ_MODEL_HPP
