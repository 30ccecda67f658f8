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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/spectrum.hpp"

using namespace qtraj;

namespace {

// 1 + 2 p gamma int_0^L cos(mu tau) s . e^{-A tau} t dtau by composite Simpson,
// stepping the exponential with a Taylor series.
double homodyne_by_quadrature(const TwoLevelParams& q, double theta, double mu) {
  const CMatrix a = bloch_matrix(q);
  const CVector s = s_vector(theta);
  const CVector t = t_vector(q, theta);
  const double h = 1e-3;
  const int n = 60000;
  const CMatrix step = oracle::taylor_exp(-a, h);
  CVector v = t;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * std::cos(mu * i * h) * s.dot(v).real();
    v = step * v;
  }
  return 1.0 + 2.0 * q.p * q.gamma * acc * h / 3.0;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) out.push_back(i);
  }
  return out;
}

TwoLevelParams dark_params() {
  TwoLevelParams p;
  p.p = 0.8;
  return p;
}

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("homodyne closed form against the correlation integral") {
    const TwoLevelParams q = oracle::squeezing_params();
    for (double theta : {oracle::kSqueezingTheta, 0.0, 1.2}) {
      for (double mu : {0.0, 1.0, 2.0, 3.5}) {
        CHECK(homodyne_inelastic(q, theta, mu) ==
              doctest::Approx(homodyne_by_quadrature(q, theta, mu)).epsilon(1e-8));
      }
    }
    TwoLevelParams r = oracle::mollow_params();
    r.nbar = 0.4;
    CHECK(homodyne_inelastic(r, 0.7, 2.5) ==
          doctest::Approx(homodyne_by_quadrature(r, 0.7, 2.5)).epsilon(1e-8));
  }

  TEST_CASE("homodyne spectrum is even and matches the pointwise form") {
    const TwoLevelParams q = oracle::squeezing_params();
    const auto mu = linspace(-4.0, 4.0, 81);
    const SpectrumResult s = homodyne_spectrum(q, 0.4, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(std::abs(s.inelastic[i] - s.inelastic[mu.size() - 1 - i]) < 1e-12);
      CHECK(std::abs(s.inelastic[i] - homodyne_inelastic(q, 0.4, mu[i])) < 1e-14);
    }
    REQUIRE(s.delta_atoms.size() == 1);
    CHECK(s.delta_atoms[0].location == 0.0);
  }

  TEST_CASE("no emission means shot noise") {
    const auto mu = linspace(0.0, 5.0, 11);
    for (double v : homodyne_spectrum(dark_params(), 0.3, mu).inelastic) CHECK(v == 1.0);
    const BoundsReport b = check_uncertainty_bounds(dark_params(), 0.3, mu, {0.0, 1.0});
    CHECK(b.min_product_margin == 0.0);
    CHECK(b.min_mean_margin == 0.0);
    CHECK(b.theta_mean_spread == 0.0);
  }

  TEST_CASE("squeezing parameter set") {
    const TwoLevelParams q = oracle::squeezing_params();
    const auto mu = linspace(0.0, 6.0, 601);
    const SpectrumResult s = homodyne_spectrum(q, oracle::kSqueezingTheta, mu);
    const auto it = std::min_element(s.inelastic.begin(), s.inelastic.end());
    CHECK(std::abs(mu[it - s.inelastic.begin()] - 2.0) <= 0.01 + 1e-12);
    CHECK(*it < 1.0);
    CHECK(homodyne_inelastic(q, oracle::kSqueezingTheta + kPi / 2, 2.0) > 1.0);
    const BoundsReport b = check_uncertainty_bounds(q, oracle::kSqueezingTheta, mu, {0.0, 0.3, 1.1});
    CHECK(b.satisfied());
    CHECK(b.theta_mean_spread < 1e-9);
    CHECK(b.min_product_margin < 0.5);
  }

  TEST_CASE("heterodyne D vanishes without detuning or without noise") {
    TwoLevelParams q = oracle::mollow_params();
    q.DeltaNu = 0.0;
    q.nu_lo = 1.7;
    for (double mu : {0.0, 0.5, 3.0}) CHECK(std::abs(heterodyne_D(q, mu, 0.7)) < 1e-12);
    TwoLevelParams r = oracle::squeezing_params();
    for (double mu : {0.0, 0.5, 3.0}) CHECK(std::abs(heterodyne_D(r, mu, 0.7)) < 1e-12);
    TwoLevelParams s = oracle::mollow_params();
    s.Omega = 2.0;
    CHECK(std::abs(heterodyne_D(s, 0.5, 0.7)) > 1e-6);
  }

  TEST_CASE("heterodyne spectrum against the fluorescence composition") {
    TwoLevelParams q = oracle::mollow_params();
    q.Omega = 2.5;
    q.nu_lo = 1.9;
    const auto mu = linspace(-6.0, 6.0, 49);
    const SpectrumResult h = heterodyne_spectrum(q, mu);
    const auto f = heterodyne_inelastic_from_fluorescence(q, mu);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(std::abs(h.inelastic[i] - f[i]) < 1e-12);
      CHECK(h.inelastic[i] >= 1.0 - 1e-12);
    }
    REQUIRE(h.delta_atoms.size() == 2);
    CHECK(h.delta_atoms[0].location == doctest::Approx(-0.9));
    q.nu_lo = q.nu;
    CHECK_THROWS_AS(heterodyne_spectrum(q, mu), ParameterError);
  }

  TEST_CASE("power spectrum equals heterodyne at zero frequency") {
    TwoLevelParams q = oracle::mollow_params();
    q.Omega = 3.0;
    for (double v : {-2.0, 0.4, 5.0}) {
      q.nu_lo = q.nu + v;
      const double h = heterodyne_spectrum(q, {0.0}).inelastic[0];
      const double p = power_spectrum(q, {q.nu_lo}).inelastic[0];
      CHECK(std::abs(h - p) < 1e-12);
    }
  }

  TEST_CASE("Mollow parameter set has three peaks") {
    const TwoLevelParams q = oracle::mollow_params();
    const auto v = linspace(-12.0, 12.0, 961);
    const FluorescenceSpectrum f = fluorescence_spectrum(q, v);
    const auto peaks = local_maxima(f.inelastic);
    REQUIRE(peaks.size() == 3);
    Eigen::EigenSolver<Eigen::Matrix3d> es(bloch_matrix(q).real());
    double side = 0.0;
    for (int i = 0; i < 3; ++i) side = std::max(side, std::abs(es.eigenvalues()(i).imag()));
    CHECK(side == doctest::Approx(std::hypot(q.Omega, q.DeltaNu)).epsilon(0.15));
    CHECK(std::abs(v[peaks[0]] + side) < 0.15 * side);
    CHECK(std::abs(v[peaks[2]] - side) < 0.15 * side);
    CHECK(std::abs(v[peaks[1]]) < 0.5);
  }

  TEST_CASE("finite-horizon analytic route") {
    const TwoLevelParams q = oracle::squeezing_params();
    const ModelSpec m = build_two_level_model(q, Detection::homodyne, oracle::kSqueezingTheta);
    const CMatrix rho0 = equilibrium_state(q);
    const double exact = homodyne_inelastic(q, oracle::kSqueezingTheta, 2.0);
    const double g50 =
        std::abs(spectrum_analytic_serial(m, rho0, {2.0}, 50.0).inelastic[0] - exact);
    const double g100 =
        std::abs(spectrum_analytic_serial(m, rho0, {2.0}, 100.0).inelastic[0] - exact);
    MESSAGE("analytic gaps at T=50, 100: " << g50 << ", " << g100);
    CHECK(g50 < 2e-2);
    CHECK(g100 < g50);

    const auto mu = linspace(0.0, 3.0, 7);
    const SpectrumResult a = spectrum_analytic_serial(m, rho0, mu, 10.0);
    const SpectrumResult b = spectrum_analytic(m, rho0, mu, 10.0, 3);
    CHECK(a.inelastic == b.inelastic);
    CHECK(a.elastic_curve == b.elastic_curve);
    CHECK(a.estimator == EstimatorKind::analytic_finite_T);

    const ModelSpec dark = build_two_level_model(dark_params(), Detection::homodyne);
    const SpectrumResult d = spectrum_analytic(dark, pauli::ground(), mu, 5.0);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(d.inelastic[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(d.elastic_curve[i]) < 1e-12);
    }
  }

  TEST_CASE("Monte Carlo spectrum of pure shot noise") {
    EnsembleSpec spec;
    spec.model = build_two_level_model(dark_params(), Detection::homodyne);
    spec.grid = {4.0, 400};
    spec.rho0 = pauli::ground();
    spec.seed = 21;
    spec.n_traj = 3000;
    spec.probes.mu = {0.0, 1.0, 2.5};
    const Ensemble ens = run_ensemble(spec);
    const SpectrumResult s = spectrum_mc(ens, 4.0);
    CHECK(s.estimator == EstimatorKind::mc);
    for (std::size_t i = 0; i < s.mu.size(); ++i) {
      CHECK(std::abs(s.inelastic[i] - 1.0) <= 3.0 * s.inelastic_se[i]);
    }
    CHECK_THROWS_AS(spectrum_mc(ens, 3.0), ArgumentError);
  }

  TEST_CASE("randomized sweep") {
    const auto a = random_parameter_sweep(20, 5);
    const auto b = random_parameter_sweep(20, 5);
    REQUIRE(a.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].params.Omega == b[i].params.Omega);
      CHECK(a[i].theta == b[i].theta);
      CHECK_NOTHROW(a[i].params.validate());
      CHECK(a[i].params.nu_lo != a[i].params.nu);
    }
    const auto mu = linspace(0.0, 10.0, 201);
    for (const auto& pt : a) {
      CHECK(check_uncertainty_bounds(pt.params, pt.theta, mu).satisfied());
    }
  }
}
