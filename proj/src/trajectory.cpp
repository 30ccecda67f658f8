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


#include "qtraj/trajectory.hpp"

#include <cmath>
#include <string>

#include "kernels.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/rng.hpp"

namespace qtraj {

using detail::CoefficientTable;
using detail::dispatch_dim;
using detail::OpN;
using detail::VecN;

void TimeGrid::validate() const {
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("grid.T: must be positive and finite");
  if (n_steps < 1) throw ArgumentError("grid.n_steps: must be at least 1");
}

void require_density_matrix(const CMatrix& rho, int dim, const char* what) {
  const std::string name(what);
  if (rho.rows() != dim || rho.cols() != dim) {
    throw ArgumentError(name + ": expected a " + std::to_string(dim) + "x" +
                        std::to_string(dim) + " matrix");
  }
  if (!all_finite(rho)) throw ArgumentError(name + ": non-finite entries");
  if (!is_hermitian(rho, 1e-10)) throw ArgumentError(name + ": not Hermitian");
  if (std::abs(rho.trace() - Complex{1.0, 0.0}) > 1e-10) {
    throw ArgumentError(name + ": trace must be 1");
  }
  if (hermitian_eigenvalues(rho).front() < -1e-10) {
    throw ArgumentError(name + ": not positive semidefinite");
  }
}

WienerPath sample_wiener(const TimeGrid& grid, std::size_t channels, std::uint64_t seed,
                         std::uint64_t stream_id) {
  grid.validate();
  WienerPath path;
  path.grid = grid;
  path.channels = channels;
  path.seed = seed;
  path.stream_id = stream_id;
  path.increments.resize(grid.n_steps * channels);
  const CounterNormal gen(seed, stream_id);
  const double sq = std::sqrt(grid.dt());
  for (std::size_t c = 0; c < channels; ++c) {
    WienerStream w(gen, static_cast<std::uint32_t>(c), sq);
    for (std::size_t j = 0; j < grid.n_steps; ++j) path.increments[j * channels + c] = w(j);
  }
  return path;
}

namespace {

void check_path(const WienerPath& path, std::size_t need) {
  path.grid.validate();
  if (path.channels < need) throw ArgumentError("Wiener path has too few channels");
  if (path.increments.size() != path.grid.n_steps * path.channels) {
    throw DimensionError("Wiener path increment count does not match its grid");
  }
}

Trajectory run_sme(const ModelSpec& m, const CMatrix& rho0, const WienerPath& path,
                   bool physical) {
  m.validate();
  check_path(path, 1);
  require_density_matrix(rho0, m.dim, "rho0");
  const TimeGrid& grid = path.grid;
  const CoefficientTable table(m, grid);
  const double dt = grid.dt();

  Trajectory out;
  out.grid = grid;
  out.sigma.reserve(grid.n_steps + 1);
  out.weight.reserve(grid.n_steps + 1);
  out.output.reserve(grid.n_steps + 1);

  dispatch_dim(m.dim, [&](auto nc) {
    constexpr int N = decltype(nc)::value;
    const detail::SmeKernel<N> kernel(m, table);
    OpN<N> sigma = rho0;
    double w1 = 0.0;
    out.sigma.emplace_back(sigma);
    out.weight.push_back(sigma.trace().real());
    out.output.push_back(w1);
    for (std::size_t j = 0; j < grid.n_steps; ++j) {
      double dw = path.at(j, 0);
      if (physical) {
        const double tr = sigma.trace().real();
        if (!(tr > 0.0)) throw DegenerateWeightError("trajectory weight reached zero");
        dw += 2.0 * kernel.observed_trace(sigma, j).real() / tr * dt;
      }
      kernel.step(sigma, j, dt, dw);
      w1 += dw;
      out.sigma.emplace_back(sigma);
      out.weight.push_back(sigma.trace().real());
      out.output.push_back(w1);
    }
  });
  return out;
}

}  // namespace

ReadoutPhases drive_orthogonal_phases(const ModelSpec& m) {
  ReadoutPhases ell(m.channels.size(), WaveSpec::monochromatic({1.0, 0.0}, 0.0));
  for (std::size_t c = 1; c < m.channels.size(); ++c) {
    const WaveSpec& f = m.channels[c].wave;
    if (f.is_zero()) continue;
    // l = i a/|a| e^{-i w t} makes conj(l) f = -i |a| purely imaginary
    ell[c] = WaveSpec::monochromatic(kI * f.amplitude / std::abs(f.amplitude), f.frequency);
  }
  return ell;
}

void validate_readout_phases(const ModelSpec& m, const ReadoutPhases& ell) {
  if (ell.empty()) return;
  if (ell.size() != m.channels.size()) {
    throw DimensionError("readout phases: expected one entry per channel");
  }
  for (std::size_t c = 1; c < ell.size(); ++c) {
    const WaveSpec& w = ell[c];
    if (w.kind != WaveSpec::Kind::monochromatic || std::abs(std::abs(w.amplitude) - 1.0) > 1e-12 ||
        !std::isfinite(w.frequency) || w.window_end != kInfiniteHorizon) {
      throw ArgumentError("readout phases: l_" + std::to_string(c + 1) +
                          " must be a unit-modulus monochromatic wave without a window");
    }
  }
}

Trajectory integrate_linear_sse(const ModelSpec& m, const CVector& r, const WienerPath& path,
                                const ReadoutPhases& ell) {
  m.validate();
  validate_readout_phases(m, ell);
  check_path(path, m.channels.size());
  if (r.size() != m.dim) throw DimensionError("integrate_linear_sse: r has the wrong dimension");
  if (std::abs(r.norm() - 1.0) > 1e-12) {
    throw ArgumentError("integrate_linear_sse: initial vector must have unit norm");
  }
  const TimeGrid& grid = path.grid;
  const CoefficientTable table(m, grid);
  const double dt = grid.dt();

  Trajectory out;
  out.grid = grid;
  out.phi.reserve(grid.n_steps + 1);
  out.weight.reserve(grid.n_steps + 1);
  out.output.reserve(grid.n_steps + 1);

  dispatch_dim(m.dim, [&](auto nc) {
    constexpr int N = decltype(nc)::value;
    const detail::SseKernel<N> kernel(m, table, ell);
    VecN<N> phi = r;
    double w1 = 0.0;
    out.phi.emplace_back(phi);
    out.weight.push_back(phi.squaredNorm());
    out.output.push_back(w1);
    for (std::size_t j = 0; j < grid.n_steps; ++j) {
      const double* dw = &path.increments[j * path.channels];
      kernel.step(phi, j, dt, dw);
      w1 += dw[0];
      out.phi.emplace_back(phi);
      out.weight.push_back(phi.squaredNorm());
      out.output.push_back(w1);
    }
  });
  return out;
}

Trajectory integrate_linear_sme(const ModelSpec& m, const CMatrix& rho0, const WienerPath& path) {
  return run_sme(m, rho0, path, false);
}

Trajectory integrate_linear_sme_physical(const ModelSpec& m, const CMatrix& rho0,
                                         const WienerPath& innovations) {
  return run_sme(m, rho0, innovations, true);
}

PosteriorPath posterior_states(const Trajectory& traj) {
  PosteriorPath out;
  const bool have_sigma = !traj.sigma.empty();
  const std::size_t n = have_sigma ? traj.sigma.size() : traj.phi.size();
  out.rho.reserve(n);
  out.density.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    CMatrix s = have_sigma ? traj.sigma[j] : CMatrix(traj.phi[j] * traj.phi[j].adjoint());
    const double w = s.trace().real();
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw DegenerateWeightError("posterior_states: nonpositive weight at step " +
                                  std::to_string(j) + "; reduce the time step");
    }
    out.rho.push_back(s / w);
    out.density.push_back(w);
  }
  return out;
}

std::vector<double> innovation_process(const ModelSpec& m, const Trajectory& traj) {
  const PosteriorPath post = posterior_states(traj);
  const double dt = traj.grid.dt();
  std::vector<double> w(traj.output.size(), 0.0);
  for (std::size_t j = 0; j + 1 < traj.output.size(); ++j) {
    const double drift =
        2.0 * (observed_operator(m, traj.grid.time(j)) * post.rho[j]).trace().real();
    w[j + 1] = w[j] + (traj.output[j + 1] - traj.output[j]) - drift * dt;
  }
  return w;
}

double mean_quadrature(const ModelSpec& m, const CMatrix& rho0, double t) {
  m.validate();
  if (!(t >= 0.0)) throw ArgumentError("mean_quadrature: t must be nonnegative");
  const Eigen::Index n2 = m.dim * m.dim;
  CVector y = CVector::Zero(n2 + 1);
  y.head(n2) = vec(rho0);
  auto rhs = [&](double s, const CVector& yy, CVector& dy) {
    const CMatrix eta = unvec(yy.head(n2), m.dim);
    dy.head(n2) = vec(liouvillian_apply(m, s, eta));
    dy(n2) = 2.0 * (observed_operator(m, s) * eta).trace().real();
  };
  return integrate_dopri5(rhs, 0.0, t, y)(n2).real();
}

Autocorrelation autocorrelation(const ModelSpec& m, const CMatrix& rho0, double t, double s) {
  m.validate();
  if (!(t >= 0.0) || !(s >= 0.0)) throw ArgumentError("autocorrelation: times must be nonnegative");
  const double t1 = std::min(t, s);
  const double t2 = std::max(t, s);
  const CMatrix eta = propagate(m, 0.0, t1, rho0);
  const CMatrix z1 = observed_operator(m, t1);
  const CMatrix x = z1 * eta + eta * z1.adjoint();
  const CMatrix y = propagate(m, t1, t2, x);
  Autocorrelation out;
  out.regular = 2.0 * (observed_operator(m, t2) * y).trace().real();
  return out;
}

}  // namespace qtraj
