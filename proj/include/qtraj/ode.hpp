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

#ifndef QTRAJ_ODE_HPP
#define QTRAJ_ODE_HPP

#include <algorithm>
#include <cmath>

#include "qtraj/errors.hpp"
#include "qtraj/numerics.hpp"

namespace qtraj {

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 0.0;  // 0 picks a step from the horizon
  double max_step = 0.0;      // 0 means unbounded
  long max_steps = 50'000'000;
};

/**
 * Dormand-Prince 5(4) with PI step control, for y' = f(t, y) on complex vectors.
 *
 * `rhs(t, y, dydt)` must write into `dydt`, which is pre-sized.
 */
template <class Rhs>
CVector integrate_dopri5(Rhs&& rhs, double t0, double t1, CVector y, const OdeOptions& opt = {}) {
  if (t1 == t0) return y;
  if (t1 < t0) throw ArgumentError("integrate_dopri5: t1 < t0");

  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const Eigen::Index n = y.size();
  CVector k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);

  const double span = t1 - t0;
  double h = opt.initial_step > 0.0 ? opt.initial_step : span * 1e-3;
  if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
  double t = t0;
  double prev_err = 1e-4;
  rhs(t, y, k1);

  for (long step = 0; step < opt.max_steps; ++step) {
    if (t >= t1) return y;
    const bool last = t + h >= t1;
    if (last) h = t1 - t;

    tmp = y + h * (a21 * k1);
    rhs(t + c2 * h, tmp, k2);
    tmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, tmp, k3);
    tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, tmp, k4);
    tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, tmp, k5);
    tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, tmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = std::abs(err[i]) / sc;
      acc += r * r;
    }
    const double enorm = std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(n, 1)));
    if (!std::isfinite(enorm)) throw NumericalError("integrate_dopri5: non-finite error estimate");

    if (enorm <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);
      double factor = 0.9 * std::pow(std::max(enorm, 1e-10), -0.7 / 5.0) *
                      std::pow(prev_err, 0.4 / 5.0);
      factor = std::clamp(factor, 0.2, 5.0);
      prev_err = std::max(enorm, 1e-4);
      h *= factor;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(enorm, -1.0 / 5.0));
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericalError("integrate_dopri5: step size underflow");
    }
  }
  throw NumericalError("integrate_dopri5: too many steps");
}

}  // namespace qtraj

#endif  // QTRAJ_ODE_HPP
