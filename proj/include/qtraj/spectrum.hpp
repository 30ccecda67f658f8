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


#ifndef QTRAJ_SPECTRUM_HPP
#define QTRAJ_SPECTRUM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/numerics.hpp"
#include "qtraj/trajectory.hpp"

/**
 * \file
 * \brief Output spectra by Monte Carlo, by the finite-horizon reduced-system
 * integrals and by the two-level closed forms, plus the uncertainty bound checker.
 */

namespace qtraj {

enum class EstimatorKind { mc, analytic_finite_T, closed_form_limit };

std::string to_string(EstimatorKind kind);

/// Elastic contribution coefficient * delta(mu - location).
struct DeltaAtom {
  double location = 0.0;
  double coefficient = 0.0;
};

struct SpectrumResult {
  std::vector<double> mu;
  std::vector<DeltaAtom> delta_atoms;   // limit forms only
  std::vector<double> elastic_curve;    // finite-T forms only
  std::vector<double> inelastic;
  std::vector<double> inelastic_se;     // Monte Carlo only
  double horizon = kInfiniteHorizon;
  double theta = 0.0;
  EstimatorKind estimator = EstimatorKind::closed_form_limit;

  /// Smooth part of the total: elastic curve (when present) plus inelastic.
  std::vector<double> total() const;
};

/// Uniform grid of n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// --- Monte Carlo ------------------------------------------------------------

/// (1/T) |int_0^T e^{i mu t} dW_1|^2 split into squared mean and variance.
///
/// The ensemble must carry Fourier sums (probes.mu) over its whole grid and
/// `T` must equal the grid horizon.
SpectrumResult spectrum_mc(const Ensemble& ens, double T);

// --- finite-horizon reduced-system route ------------------------------------

/// Finite-T spectrum from the reduced dynamics, one ODE solve per frequency.
SpectrumResult spectrum_analytic(const ModelSpec& m, const CMatrix& rho0,
                                 const std::vector<double>& mu, double T, int threads = 0);

/// Serial reference for spectrum_analytic; identical results.
SpectrumResult spectrum_analytic_serial(const ModelSpec& m, const CMatrix& rho0,
                                        const std::vector<double>& mu, double T);

// --- two-level closed forms --------------------------------------------------

/// s(theta) = (cos theta, sin theta, 0).
CVector s_vector(double theta);

/// t(theta) built from the equilibrium Bloch vector.
CVector t_vector(const TwoLevelParams& params, double theta);

double homodyne_inelastic(const TwoLevelParams& params, double theta, double mu);

SpectrumResult homodyne_spectrum(const TwoLevelParams& params, double theta,
                                 const std::vector<double>& mu);

/// Cross term D(mu, v) of the heterodyne inelastic spectrum.
double heterodyne_D(const TwoLevelParams& params, double mu, double v);

/// Throws ParameterError when nu_lo == nu.
SpectrumResult heterodyne_spectrum(const TwoLevelParams& params, const std::vector<double>& mu);

/// Heterodyne inelastic part through the fluorescence spectrum,
/// 1 + 2 pi p [Sigma(v + mu) + Sigma(v - mu)]; an independent route to the same curve.
std::vector<double> heterodyne_inelastic_from_fluorescence(const TwoLevelParams& params,
                                                           const std::vector<double>& mu);

struct FluorescenceSpectrum {
  std::vector<double> v;
  std::vector<double> inelastic;       // Sigma_inel(v)
  double elastic_coefficient = 0.0;    // gamma (x^2 + y^2) / 4, atom at v = 0
};

double fluorescence_inelastic(const TwoLevelParams& params, double v);

FluorescenceSpectrum fluorescence_spectrum(const TwoLevelParams& params,
                                           const std::vector<double>& v);

struct PowerSpectrum {
  std::vector<double> nu_lo;
  std::vector<double> inelastic;       // 1 + 4 pi p Sigma_inel(nu_lo - nu)
  DeltaAtom elastic;                   // at v = nu_lo - nu = 0
};

PowerSpectrum power_spectrum(const TwoLevelParams& params, const std::vector<double>& nu_lo);

// --- bounds ------------------------------------------------------------------

struct BoundsReport {
  std::vector<double> mu;
  double theta = 0.0;
  std::vector<double> product;           // S(mu; theta) S(mu; theta + pi/2)
  std::vector<double> arithmetic_mean;   // (S(mu; theta) + S(mu; theta + pi/2)) / 2
  double min_product_margin = 0.0;       // min product - 1
  double min_mean_margin = 0.0;          // min mean - 1
  std::vector<double> theta_sample;
  double theta_mean_spread = 0.0;        // max |mean(theta') - mean(theta)| over the sample

  bool satisfied(double tol = 1e-9) const {
    return min_product_margin >= -tol && min_mean_margin >= -tol;
  }
};

/// Closed-form homodyne bounds for the two-level model.
BoundsReport check_uncertainty_bounds(const TwoLevelParams& params, double theta,
                                      const std::vector<double>& mu,
                                      const std::vector<double>& theta_sample = {});

/// Finite-horizon bounds for a generic model (theta taken from the model).
BoundsReport check_uncertainty_bounds(const ModelSpec& m, const CMatrix& rho0,
                                      const std::vector<double>& mu, double T,
                                      const std::vector<double>& theta_sample = {},
                                      int threads = 0);

struct SweepPoint {
  TwoLevelParams params;
  double theta = 0.0;
};

/// Seeded random parameter sets: gamma in [0.5, 2], Omega in [0, 10],
/// DeltaNu in [-3, 3], nbar in [0, 0.5], kd in [0, 1], p in [0.05, 0.95],
/// theta in (-pi, pi], nu = 1 and |nu_lo - nu| in [0.2, 5].
std::vector<SweepPoint> random_parameter_sweep(std::size_t n, std::uint64_t seed);

}  // namespace qtraj

#endif  // QTRAJ_SPECTRUM_HPP
