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

// Fixed-size Euler-Maruyama step kernels. Private to the library.

#ifndef QTRAJ_SRC_KERNELS_HPP
#define QTRAJ_SRC_KERNELS_HPP

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "qtraj/errors.hpp"
#include "qtraj/model.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj::detail {

template <int N>
using OpN = Eigen::Matrix<Complex, N, N>;
template <int N>
using VecN = Eigen::Matrix<Complex, N, 1>;

/// Calls f(std::integral_constant<int, N>{}) for the runtime dimension.
template <class F>
decltype(auto) dispatch_dim(int dim, F&& f) {
  switch (dim) {
    case 1: return f(std::integral_constant<int, 1>{});
    case 2: return f(std::integral_constant<int, 2>{});
    case 3: return f(std::integral_constant<int, 3>{});
    case 4: return f(std::integral_constant<int, 4>{});
    default: throw DimensionError("dimension must lie in [1, 4]");
  }
}

/// Time-dependent coefficients on the grid points, shared by every trajectory.
struct CoefficientTable {
  std::vector<Complex> observed_phase;           // e^{i theta} conj(h(t_j))
  std::vector<Complex> f1;                       // f_1(t_j)
  std::vector<std::size_t> waved;                // channels with a nonzero wave
  std::vector<std::vector<Complex>> wave;        // wave[c][j] = f_{waved[c]}(t_j)
  std::vector<double> time;                      // t_j

  CoefficientTable(const ModelSpec& m, const TimeGrid& grid) {
    const std::size_t n = grid.n_steps + 1;
    observed_phase.resize(n);
    f1.resize(n);
    time.resize(n);
    for (std::size_t c = 0; c < m.channels.size(); ++c) {
      if (!m.channels[c].wave.is_zero()) waved.push_back(c);
    }
    wave.assign(waved.size(), std::vector<Complex>(n));
    const Complex eth = std::polar(1.0, m.theta);
    for (std::size_t j = 0; j < n; ++j) {
      const double t = grid.time(j);
      time[j] = t;
      observed_phase[j] = eth * std::conj(m.lo(t));
      f1[j] = m.channels[0].wave(t);
      for (std::size_t c = 0; c < waved.size(); ++c) wave[c][j] = m.channels[waved[c]].wave(t);
    }
  }
};

/// Sets eigenvalues below -1e-12 Tr(sigma) to zero; sigma must be Hermitian.
template <int N>
void clip_negative(OpN<N>& sigma) {
  const double tr = sigma.trace().real();
  const double thr = -1e-12 * std::abs(tr);
  if constexpr (N == 1) {
    if (sigma(0, 0).real() < thr) sigma(0, 0) = 0.0;
  } else if constexpr (N == 2) {
    const double a = sigma(0, 0).real();
    const double d = sigma(1, 1).real();
    const double m = 0.5 * (a + d);
    const double h = 0.5 * (a - d);
    const double r = std::sqrt(h * h + std::norm(sigma(0, 1)));
    if (m - r >= thr || r == 0.0) return;
    // keep only the upper eigenvalue: (m + r) (I + (sigma - m)/r) / 2
    const double lmax = m + r;
    OpN<2> p = (sigma - m * OpN<2>::Identity()) / r;
    p += OpN<2>::Identity();
    sigma = (0.5 * lmax) * p;
  } else {
    Eigen::SelfAdjointEigenSolver<OpN<N>> es(sigma);
    auto ev = es.eigenvalues();
    if (ev(0) >= thr) return;
    for (int i = 0; i < N; ++i) {
      if (ev(i) < thr) ev(i) = 0.0;
    }
    sigma = es.eigenvectors() * ev.template cast<Complex>().asDiagonal() *
            es.eigenvectors().adjoint();
  }
}

/// Linear SME step: sigma += L(t)[sigma] dt + (C sigma + sigma C^dagger) dW_1.
template <int N>
class SmeKernel {
 public:
  using Op = OpN<N>;
  static constexpr int N2 = N * N;

  SmeKernel(const ModelSpec& m, const CoefficientTable& table) : table_(table) {
    const Op k = effective_drift_K(m);
    const Op id = Op::Identity();
    // vec(K s + s K^dagger + sum R s R^dagger)
    Eigen::Matrix<Complex, N2, N2> s =
        kron(id, k) + kron(k.conjugate(), id);
    for (const Channel& ch : m.channels) {
      const Op r = ch.R;
      s += kron(r.conjugate(), r);
    }
    static_ = s;
    r1_ = m.channels[0].R;
    for (std::size_t c : table.waved) drive_.push_back(m.channels[c].R);
  }

  /// C(t_j) = e^{i theta} conj(h) (R_1 + f_1).
  Op observed(std::size_t j) const {
    return table_.observed_phase[j] * (r1_ + table_.f1[j] * Op::Identity());
  }

  /// Tr{C(t_j) sigma}.
  Complex observed_trace(const Op& sigma, std::size_t j) const {
    return table_.observed_phase[j] * ((r1_ * sigma).trace() + table_.f1[j] * sigma.trace());
  }

  void step(Op& sigma, std::size_t j, double dt, double dw) const {
    VecN<N2> dv = static_ * Eigen::Map<const VecN<N2>>(sigma.data());
    Op drift = Eigen::Map<const Op>(dv.data());
    if (!drive_.empty()) {
      Op hf = Op::Zero();
      for (std::size_t c = 0; c < drive_.size(); ++c) {
        const Complex f = table_.wave[c][j];
        hf += kI * (std::conj(f) * drive_[c] - f * drive_[c].adjoint());
      }
      const Op hs = hf * sigma;
      drift -= kI * (hs - hs.adjoint());
    }
    const Op cs = observed(j) * sigma;
    sigma += dt * drift + dw * (cs + cs.adjoint());
    sigma = 0.5 * (sigma + sigma.adjoint()).eval();
    clip_negative<N>(sigma);
  }

 private:
  const CoefficientTable& table_;
  Eigen::Matrix<Complex, N2, N2> static_;
  Op r1_;
  std::vector<Op> drive_;
};

/// Linear SSE step driven by every active channel.
template <int N>
class SseKernel {
 public:
  using Op = OpN<N>;
  using Vec = VecN<N>;

  SseKernel(const ModelSpec& m, const CoefficientTable& table, const ReadoutPhases& ell)
      : table_(table) {
    k_ = effective_drift_K(m);
    std::vector<int> wave_slot(m.channels.size(), -1);
    for (std::size_t c = 0; c < table.waved.size(); ++c) {
      wave_slot[table.waved[c]] = static_cast<int>(c);
    }
    for (std::size_t c = 0; c < m.channels.size(); ++c) {
      const Op r = m.channels[c].R;
      const bool r_zero = r.isZero(0.0);
      if (r_zero && wave_slot[c] < 0) continue;
      std::vector<Complex> ell_bar;
      if (c > 0 && !ell.empty()) {
        ell_bar.resize(table.observed_phase.size());
        for (std::size_t j = 0; j < ell_bar.size(); ++j) ell_bar[j] = std::conj(ell[c](table.time[j]));
      }
      active_.push_back({c, r, wave_slot[c], std::move(ell_bar)});
    }
  }

  /// Channels whose noise enters the equation (others may be skipped).
  std::vector<std::size_t> active_channels() const {
    std::vector<std::size_t> out;
    for (const auto& a : active_) out.push_back(a.channel);
    return out;
  }

  /// `dw[c]` is the increment of model channel c.
  void step(Vec& phi, std::size_t j, double dt, const double* dw) const {
    Vec inc = dt * (k_ * phi);
    for (const auto& a : active_) {
      const Complex f = a.wave_slot >= 0 ? table_.wave[a.wave_slot][j] : Complex{};
      const Complex ell_bar = a.channel == 0    ? table_.observed_phase[j]
                              : a.ell_bar.empty() ? Complex{1.0, 0.0}
                                                  : a.ell_bar[j];
      Vec rphi = a.R * phi;
      if (a.wave_slot >= 0) {
        inc -= dt * (f * (a.R.adjoint() * phi) + 0.5 * std::norm(f) * phi);
        rphi += f * phi;
      }
      inc += (ell_bar * dw[a.channel]) * rphi;
    }
    phi += inc;
  }

 private:
  struct Active {
    std::size_t channel;
    Op R;
    int wave_slot;
    std::vector<Complex> ell_bar;  // empty: l_k = 1
  };

  const CoefficientTable& table_;
  Op k_;
  std::vector<Active> active_;
};

}  // namespace qtraj::detail

#endif  // QTRAJ_SRC_KERNELS_HPP
