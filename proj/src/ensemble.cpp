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


#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include <omp.h>

#include "kernels.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj {

using detail::CoefficientTable;
using detail::dispatch_dim;
using detail::OpN;
using detail::VecN;

namespace {

// Rotating phases e^{i mu t_j} are refreshed exactly every kResync steps.
constexpr std::size_t kResync = 256;

class FourierAccumulator {
 public:
  FourierAccumulator(const std::vector<double>& mu, double dt)
      : mu_(mu), dt_(dt), rot_(mu.size()), step_(mu.size()), acc_(mu.size(), Complex{}) {
    for (std::size_t i = 0; i < mu.size(); ++i) step_[i] = std::polar(1.0, mu[i] * dt);
  }

  void add(std::size_t j, double t, double dw) {
    if (mu_.empty()) return;
    if (j % kResync == 0) {
      for (std::size_t i = 0; i < mu_.size(); ++i) rot_[i] = std::polar(1.0, mu_[i] * t);
    }
    for (std::size_t i = 0; i < mu_.size(); ++i) {
      acc_[i] += rot_[i] * dw;
      rot_[i] *= step_[i];
    }
  }

  std::vector<Complex> take() { return std::move(acc_); }

 private:
  const std::vector<double>& mu_;
  double dt_;
  std::vector<Complex> rot_, step_, acc_;
};

class Sampler {
 public:
  explicit Sampler(const std::vector<std::size_t>& steps) : steps_(steps) {}
  bool due(std::size_t j) {
    if (next_ < steps_.size() && steps_[next_] == j) {
      ++next_;
      return true;
    }
    return false;
  }

 private:
  const std::vector<std::size_t>& steps_;
  std::size_t next_ = 0;
};

TrajectoryRecord run_sme_record(const EnsembleSpec& spec, const CoefficientTable& table,
                                std::uint64_t stream) {
  const TimeGrid& grid = spec.grid;
  const double dt = grid.dt();
  const bool physical = spec.measure == Measure::physical;
  const bool track_drift = physical || spec.probes.innovation;
  TrajectoryRecord rec;
  rec.stream_id = stream;

  dispatch_dim(spec.model.dim, [&](auto nc) {
    constexpr int N = decltype(nc)::value;
    const detail::SmeKernel<N> kernel(spec.model, table);
    const CounterNormal gen(spec.seed, stream);
    WienerStream noise(gen, 0, std::sqrt(dt));
    FourierAccumulator fourier(spec.probes.mu, dt);
    Sampler sampler(spec.probes.sample_steps);
    OpN<N> sigma = spec.rho0;
    double w1 = 0.0;
    double prev = 0.0;

    auto record = [&](std::size_t j) {
      if (!sampler.due(j)) return;
      rec.output_samples.push_back(w1);
      rec.weight_samples.push_back(sigma.trace().real());
      if (spec.probes.record_states) rec.state_samples.emplace_back(sigma);
    };

    record(0);
    for (std::size_t j = 0; j < grid.n_steps; ++j) {
      double drift = 0.0;
      if (track_drift) {
        const double tr = sigma.trace().real();
        if (!(tr > 0.0)) {
          throw DegenerateWeightError("trajectory " + std::to_string(stream) +
                                      ": weight reached zero; reduce the time step");
        }
        drift = 2.0 * kernel.observed_trace(sigma, j).real() / tr;
      }
      double dw = noise(j);
      if (physical) dw += drift * dt;
      if (spec.probes.innovation) {
        const double d = dw - drift * dt;
        rec.innovation.sum_sq += d * d;
        if (j > 0) rec.innovation.sum_lag1 += prev * d;
        prev = d;
        ++rec.innovation.count;
      }
      fourier.add(j, grid.time(j), dw);
      kernel.step(sigma, j, dt, dw);
      w1 += dw;
      record(j + 1);
    }
    rec.final_weight = sigma.trace().real();
    rec.estimator_weight = physical ? 1.0 : rec.final_weight;
    rec.fourier = fourier.take();
  });
  return rec;
}

TrajectoryRecord run_sse_record(const EnsembleSpec& spec, const CoefficientTable& table,
                                std::uint64_t stream) {
  const TimeGrid& grid = spec.grid;
  const double dt = grid.dt();
  TrajectoryRecord rec;
  rec.stream_id = stream;

  dispatch_dim(spec.model.dim, [&](auto nc) {
    constexpr int N = decltype(nc)::value;
    const detail::SseKernel<N> kernel(spec.model, table, spec.ell);
    const CounterNormal gen(spec.seed, stream);
    const double sq = std::sqrt(dt);
    std::vector<std::size_t> channels = kernel.active_channels();
    if (std::find(channels.begin(), channels.end(), 0) == channels.end()) {
      channels.insert(channels.begin(), 0);
    }
    std::vector<WienerStream> streams;
    for (std::size_t c : channels) streams.emplace_back(gen, static_cast<std::uint32_t>(c), sq);
    std::vector<double> dw(spec.model.channels.size(), 0.0);
    FourierAccumulator fourier(spec.probes.mu, dt);
    Sampler sampler(spec.probes.sample_steps);
    VecN<N> phi = spec.psi0;
    double w1 = 0.0;

    auto record = [&](std::size_t j) {
      if (!sampler.due(j)) return;
      rec.output_samples.push_back(w1);
      rec.weight_samples.push_back(phi.squaredNorm());
      if (spec.probes.record_states) rec.state_samples.emplace_back(phi * phi.adjoint());
    };

    record(0);
    for (std::size_t j = 0; j < grid.n_steps; ++j) {
      for (std::size_t c = 0; c < channels.size(); ++c) dw[channels[c]] = streams[c](j);
      fourier.add(j, grid.time(j), dw[0]);
      kernel.step(phi, j, dt, dw.data());
      w1 += dw[0];
      record(j + 1);
    }
    rec.final_weight = phi.squaredNorm();
    rec.estimator_weight = rec.final_weight;
    rec.fourier = fourier.take();
  });
  return rec;
}

TrajectoryRecord run_record(const EnsembleSpec& spec, const CoefficientTable& table,
                            std::size_t index) {
  const std::uint64_t stream = spec.first_stream + index;
  return spec.equation == Equation::sme ? run_sme_record(spec, table, stream)
                                        : run_sse_record(spec, table, stream);
}

}  // namespace

void EnsembleSpec::validate() const {
  model.validate();
  grid.validate();
  if (n_traj < 1) throw ArgumentError("ensemble.n_traj: must be at least 1");
  if (equation == Equation::sme) {
    require_density_matrix(rho0, model.dim, "initial_state");
  } else {
    if (psi0.size() != model.dim) throw DimensionError("initial_state: wrong dimension");
    if (std::abs(psi0.norm() - 1.0) > 1e-12) throw ArgumentError("initial_state: must have unit norm");
    if (measure == Measure::physical) {
      throw ArgumentError("ensemble.measure: physical sampling needs the master equation");
    }
    if (probes.innovation) throw ArgumentError("innovation statistics need the master equation");
    validate_readout_phases(model, ell);
  }
  for (std::size_t i = 0; i < probes.sample_steps.size(); ++i) {
    if (probes.sample_steps[i] > grid.n_steps) throw ArgumentError("sample step beyond the grid");
    if (i > 0 && probes.sample_steps[i] <= probes.sample_steps[i - 1]) {
      throw ArgumentError("sample steps must be strictly increasing");
    }
  }
  for (double mu : probes.mu) {
    if (!std::isfinite(mu)) throw ArgumentError("spectrum.mu: non-finite frequency");
  }
}

std::vector<double> Ensemble::estimator_weights() const {
  std::vector<double> w;
  w.reserve(records.size());
  for (const auto& r : records) w.push_back(r.estimator_weight);
  return w;
}

TrajectoryRecord run_trajectory(const EnsembleSpec& spec, std::size_t index) {
  spec.validate();
  const CoefficientTable table(spec.model, spec.grid);
  return run_record(spec, table, index);
}

Ensemble run_ensemble_serial(const EnsembleSpec& spec) {
  spec.validate();
  const CoefficientTable table(spec.model, spec.grid);
  Ensemble ens{spec, {}};
  ens.records.reserve(spec.n_traj);
  for (std::size_t i = 0; i < spec.n_traj; ++i) ens.records.push_back(run_record(spec, table, i));
  return ens;
}

Ensemble run_ensemble(const EnsembleSpec& spec, int threads) {
  spec.validate();
  const CoefficientTable table(spec.model, spec.grid);
  Ensemble ens{spec, std::vector<TrajectoryRecord>(spec.n_traj)};
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const long n = static_cast<long>(spec.n_traj);
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 8) num_threads(nt)
  for (long i = 0; i < n; ++i) {
    try {
      ens.records[static_cast<std::size_t>(i)] = run_record(spec, table, static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qtraj_ensemble_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return ens;
}

ComplexEstimate characteristic_functional(const Ensemble& ens, const StepFunction& k) {
  if (ens.records.empty()) throw ArgumentError("characteristic_functional: empty ensemble");
  if (k.breakpoints.size() != k.values.size() + 1) {
    throw ArgumentError("characteristic_functional: need one more breakpoint than values");
  }
  const TimeGrid& grid = ens.spec.grid;
  const auto& steps = ens.spec.probes.sample_steps;
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < k.breakpoints.size(); ++i) {
    const double b = k.breakpoints[i];
    if (i > 0 && !(b > k.breakpoints[i - 1])) {
      throw ArgumentError("characteristic_functional: breakpoints must increase");
    }
    if (b < 0.0 || b > grid.T * (1.0 + 1e-12)) {
      throw ArgumentError("characteristic_functional: breakpoint outside [0, T]");
    }
    const auto j = static_cast<std::size_t>(std::llround(b / grid.dt()));
    if (std::abs(grid.time(j) - b) > 1e-9 * grid.T) {
      throw ArgumentError("characteristic_functional: breakpoint is not a grid time");
    }
    const auto it = std::lower_bound(steps.begin(), steps.end(), j);
    if (it == steps.end() || *it != j) {
      throw ArgumentError("characteristic_functional: breakpoint was not sampled");
    }
    slot.push_back(static_cast<std::size_t>(it - steps.begin()));
  }

  const std::size_t n = ens.records.size();
  std::vector<double> re(n), im(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto& w = ens.records[r].output_samples;
    double x = 0.0;
    for (std::size_t i = 0; i < k.values.size(); ++i) {
      x += k.values[i] * (w[slot[i + 1]] - w[slot[i]]);
    }
    re[r] = std::cos(x);
    im[r] = std::sin(x);
  }
  const std::vector<double> weights = ens.estimator_weights();
  const Estimate er = weighted_estimate(re, weights);
  const Estimate ei = weighted_estimate(im, weights);
  return {Complex{er.mean, ei.mean}, er.se, ei.se};
}

InnovationSummary innovation_summary(const Ensemble& ens, std::uint64_t resample_seed) {
  if (ens.records.empty()) throw ArgumentError("innovation_summary: empty ensemble");
  if (!ens.spec.probes.innovation) {
    throw ArgumentError("innovation_summary: ensemble did not record innovation statistics");
  }
  const std::vector<double> weights = ens.estimator_weights();
  const double offset = 1.0 - CounterNormal(resample_seed, 0).uniforms(0, 0).first;
  const std::vector<std::size_t> ancestors = systematic_resample(weights, offset);
  std::vector<double> copies(weights.size(), 0.0);
  for (std::size_t a : ancestors) copies[a] += 1.0;

  const std::size_t n = ens.records.size();
  std::vector<double> num_v(n), den_v(n), num_l(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = ens.records[i].innovation;
    num_v[i] = copies[i] * s.sum_sq;
    den_v[i] = copies[i] * static_cast<double>(s.count);
    num_l[i] = copies[i] * s.sum_lag1;
  }
  const double sv = pairwise_sum(num_v);
  const double sn = pairwise_sum(den_v);
  const double sl = pairwise_sum(num_l);
  if (!(sn > 0.0) || !(sv > 0.0)) throw ArgumentError("innovation_summary: no increments recorded");
  const double var = sv / sn;
  const double rho = sl / sv;

  std::vector<double> ev(n), el(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = ens.records[i].innovation;
    const double a = copies[i];
    ev[i] = a * a * std::pow(s.sum_sq - var * static_cast<double>(s.count), 2);
    el[i] = a * a * std::pow(s.sum_lag1 - rho * s.sum_sq, 2);
  }
  InnovationSummary out;
  out.variance = {var, std::sqrt(pairwise_sum(ev)) / sn};
  out.lag1_correlation = {rho, std::sqrt(pairwise_sum(el)) / sv};
  out.effective_sample_size = effective_sample_size(weights);
  return out;
}

}  // namespace qtraj
