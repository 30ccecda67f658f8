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

#ifndef QTRAJ_TRAJECTORY_HPP
#define QTRAJ_TRAJECTORY_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qtraj/model.hpp"
#include "qtraj/numerics.hpp"
#include "qtraj/stats.hpp"

/**
 * \file
 * \brief Euler-Maruyama integration of the linear stochastic Schrödinger and
 * master equations under the reference Wiener measure.
 *
 * Physical expectations are recovered by weighting with Tr sigma_T. Every
 * trajectory is a pure function of (model, grid, seed, stream id).
 */

namespace qtraj {

/// Uniform grid 0 = t_0 < ... < t_n = T.
struct TimeGrid {
  double T = 1.0;
  std::size_t n_steps = 1;

  double dt() const { return T / static_cast<double>(n_steps); }
  double time(std::size_t step) const {
    return T * static_cast<double>(step) / static_cast<double>(n_steps);
  }
  void validate() const;
};

/// Wiener increments, step-major: increments[step * channels + channel].
struct WienerPath {
  TimeGrid grid;
  std::size_t channels = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::vector<double> increments;

  double at(std::size_t step, std::size_t channel) const {
    return increments[step * channels + channel];
  }
};

/// A stored trajectory. Exactly one of `sigma` / `phi` is populated.
struct Trajectory {
  TimeGrid grid;
  std::vector<CMatrix> sigma;   // unnormalized a posteriori states
  std::vector<CVector> phi;     // linear SSE vectors
  std::vector<double> weight;   // Tr sigma_t or |phi_t|^2, weight[0] = 1
  std::vector<double> output;   // W_1(t_j), output[0] = 0
};

struct PosteriorPath {
  std::vector<CMatrix> rho;      // sigma_t / Tr sigma_t
  std::vector<double> density;   // Tr sigma_t
};

/**
 * Readout phases l_k of the unobserved channels k >= 2 in the linear SSE, as
 * unit-modulus monochromatic waves indexed by channel (entry 0 is ignored:
 * channel 1 always uses e^{-i theta} h). Empty means l_k = 1.
 */
using ReadoutPhases = std::vector<WaveSpec>;

/// Phases with Re(conj(l_k) f_k) = 0, so the coherent drive does not enter |phi_t|^2 noise.
ReadoutPhases drive_orthogonal_phases(const ModelSpec& m);

void validate_readout_phases(const ModelSpec& m, const ReadoutPhases& ell);

WienerPath sample_wiener(const TimeGrid& grid, std::size_t channels, std::uint64_t seed,
                         std::uint64_t stream_id);

/// Linear SSE driven by all channels of `path`; l_1 = e^{-i theta} h, l_k = 1 otherwise.
///
/// Throws ArgumentError when |r| != 1 or the path has fewer channels than the model.
Trajectory integrate_linear_sse(const ModelSpec& m, const CVector& r, const WienerPath& path,
                                const ReadoutPhases& ell = {});

/// Linear SME driven by channel 0 of `path` (the observed output increments).
///
/// Throws ArgumentError unless rho0 is a density matrix.
Trajectory integrate_linear_sme(const ModelSpec& m, const CMatrix& rho0, const WienerPath& path);

/// Linear SME sampled under the physical law: channel 0 of `innovations` is
/// read as the innovation and the output is W_1 = innovation + predictable drift.
Trajectory integrate_linear_sme_physical(const ModelSpec& m, const CMatrix& rho0,
                                         const WienerPath& innovations);

/// rho_t = sigma_t / Tr sigma_t. Throws DegenerateWeightError on a nonpositive weight.
PosteriorPath posterior_states(const Trajectory& traj);

/// W_1(t) - 2 Re int_0^t Tr{Z(s) rho_s} ds by the left-point rule.
std::vector<double> innovation_process(const ModelSpec& m, const Trajectory& traj);

/// 2 Re int_0^t Tr{Z(s) eta_s} ds, the mean cumulated output.
double mean_quadrature(const ModelSpec& m, const CMatrix& rho0, double t);

/// E[I(t) I(s)] = delta_coefficient * delta(t - s) + regular.
struct Autocorrelation {
  double delta_coefficient = 1.0;
  double regular = 0.0;
};

Autocorrelation autocorrelation(const ModelSpec& m, const CMatrix& rho0, double t, double s);

/// Throws ArgumentError unless rho is Hermitian, trace one and positive semidefinite.
void require_density_matrix(const CMatrix& rho, int dim, const char* what);

// --- ensembles --------------------------------------------------------------

/// Law under which output paths are drawn.
enum class Measure {
  reference,  // Wiener measure Q; physical averages need the weight Tr sigma_T
  physical,   // innovation-driven sampling; every trajectory has unit estimator weight
};

enum class Equation { sme, sse };

/// What each trajectory reports back (full paths are not kept).
struct ProbeSpec {
  std::vector<std::size_t> sample_steps;  // grid indices for output/weight/state samples
  bool record_states = false;
  std::vector<double> mu;                 // frequencies for sum_j e^{i mu t_j} dW_j
  bool innovation = false;                // accumulate innovation increment statistics
};

struct InnovationStats {
  double sum_sq = 0.0;    // sum of squared innovation increments
  double sum_lag1 = 0.0;  // sum of products of consecutive increments
  std::size_t count = 0;
};

struct TrajectoryRecord {
  std::uint64_t stream_id = 0;
  double final_weight = 1.0;
  double estimator_weight = 1.0;
  std::vector<double> output_samples;
  std::vector<double> weight_samples;
  std::vector<CMatrix> state_samples;
  std::vector<Complex> fourier;
  InnovationStats innovation;
};

struct EnsembleSpec {
  ModelSpec model;
  TimeGrid grid;
  CMatrix rho0;        // SME initial state
  CVector psi0;        // SSE initial vector
  ReadoutPhases ell;   // SSE readout phases of unobserved channels
  std::uint64_t seed = 0;
  std::uint64_t first_stream = 0;
  std::size_t n_traj = 0;
  Measure measure = Measure::reference;
  Equation equation = Equation::sme;
  ProbeSpec probes;

  void validate() const;
};

struct Ensemble {
  EnsembleSpec spec;
  std::vector<TrajectoryRecord> records;

  std::vector<double> estimator_weights() const;
};

/// Integrates trajectory `index` of the ensemble (stream first_stream + index).
TrajectoryRecord run_trajectory(const EnsembleSpec& spec, std::size_t index);

/// OpenMP runner; `threads` <= 0 uses the OpenMP default.
Ensemble run_ensemble(const EnsembleSpec& spec, int threads = 0);

/// Serial reference runner, bit-identical to run_ensemble.
Ensemble run_ensemble_serial(const EnsembleSpec& spec);

/// Piecewise-constant k: values[i] on [breakpoints[i], breakpoints[i+1]).
struct StepFunction {
  std::vector<double> breakpoints;
  std::vector<double> values;
};

struct ComplexEstimate {
  Complex value;
  double se_real = 0.0;
  double se_imag = 0.0;
};

/// E[exp(i int k dW_1)] under the physical law, from the ensemble.
///
/// Every breakpoint must be a sampled grid time of the ensemble.
ComplexEstimate characteristic_functional(const Ensemble& ens, const StepFunction& k);

/// Pooled innovation increment variance and lag-1 autocorrelation after
/// resampling trajectories with their physical weights.
struct InnovationSummary {
  Estimate variance;
  Estimate lag1_correlation;
  double effective_sample_size = 0.0;
};

InnovationSummary innovation_summary(const Ensemble& ens, std::uint64_t resample_seed);

}  // namespace qtraj

#endif  // QTRAJ_TRAJECTORY_HPP
