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


#include "qtraj/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include <omp.h>

#include "qtraj/errors.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/ode.hpp"
#include "qtraj/rng.hpp"
#include "qtraj/stats.hpp"

namespace qtraj {

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::mc: return "mc";
    case EstimatorKind::analytic_finite_T: return "analytic-finite-T";
    case EstimatorKind::closed_form_limit: return "closed-form-limit";
  }
  return "unknown";
}

std::vector<double> SpectrumResult::total() const {
  std::vector<double> out = inelastic;
  if (elastic_curve.size() == out.size()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += elastic_curve[i];
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out.back() = hi;
  return out;
}

// --- Monte Carlo ------------------------------------------------------------

SpectrumResult spectrum_mc(const Ensemble& ens, double T) {
  if (ens.records.empty()) throw ArgumentError("spectrum_mc: empty ensemble");
  const TimeGrid& grid = ens.spec.grid;
  if (T > grid.T * (1.0 + 1e-12)) throw ArgumentError("spectrum_mc: T exceeds the ensemble grid");
  if (std::abs(T - grid.T) > 1e-12 * grid.T) {
    throw ArgumentError("spectrum_mc: Fourier sums cover the whole grid; T must equal its horizon");
  }
  const std::vector<double>& mu = ens.spec.probes.mu;
  if (mu.empty()) throw ArgumentError("spectrum_mc: ensemble carries no Fourier sums");

  const std::size_t n = ens.records.size();
  const std::vector<double> w = ens.estimator_weights();
  const double wsum = pairwise_sum(w);
  if (!(wsum > 0.0)) throw DegenerateWeightError("spectrum_mc: total weight is not positive");
  std::vector<double> w2(n);
  for (std::size_t i = 0; i < n; ++i) w2[i] = w[i] * w[i];
  const double kish = pairwise_sum(w2) / (wsum * wsum);
  const double bessel = n > 1 && kish < 1.0 ? 1.0 / (1.0 - kish) : 1.0;

  SpectrumResult out;
  out.mu = mu;
  out.horizon = T;
  out.theta = ens.spec.model.theta;
  out.estimator = EstimatorKind::mc;
  out.elastic_curve.resize(mu.size());
  out.inelastic.resize(mu.size());
  out.inelastic_se.resize(mu.size());

  std::vector<double> re(n), im(n), g(n), buf(n);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex f = ens.records[i].fourier.at(k);
      re[i] = w[i] * f.real();
      im[i] = w[i] * f.imag();
    }
    const Complex mean{pairwise_sum(re) / wsum, pairwise_sum(im) / wsum};
    for (std::size_t i = 0; i < n; ++i) {
      g[i] = std::norm(ens.records[i].fourier[k] - mean) / T;
      buf[i] = w[i] * g[i];
    }
    const double gbar = pairwise_sum(buf) / wsum;
    const double inel = gbar * bessel;
    for (std::size_t i = 0; i < n; ++i) buf[i] = w[i] * std::norm(ens.records[i].fourier[k]) / T;
    const double tot = pairwise_sum(buf) / wsum;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = w[i] * (g[i] - gbar);
      buf[i] = d * d;
    }
    out.inelastic[k] = inel;
    out.elastic_curve[k] = tot - inel;
    out.inelastic_se[k] = bessel * std::sqrt(pairwise_sum(buf)) / wsum;
  }
  return out;
}

// --- finite-horizon reduced-system route ------------------------------------

namespace {

struct AnalyticPoint {
  double inelastic;
  double elastic;
};

// State: vec(eta), vec(Y), int Re Tr{(Zt + Zt^dagger) Y}, int e^{i mu t} Tr{(Z + Z^dagger) eta}.
// dY/dt = L(t) Y + i mu Y + Zt eta + eta Zt^dagger, Zt = Z - Tr(Z eta).
AnalyticPoint analytic_point(const ModelSpec& m, const CMatrix& static_l, const CMatrix& rho0,
                             double mu, double T) {
  const Eigen::Index n = m.dim;
  const Eigen::Index n2 = n * n;
  const bool driven = std::any_of(m.channels.begin(), m.channels.end(),
                                  [](const Channel& c) { return !c.wave.is_zero(); });
  const CMatrix id = CMatrix::Identity(n, n);

  auto rhs = [&](double t, const CVector& y, CVector& dy) {
    const CMatrix eta = unvec(y.segment(0, n2), n);
    const CMatrix ym = unvec(y.segment(n2, n2), n);
    CVector le = static_l * y.segment(0, n2);
    CVector ly = static_l * y.segment(n2, n2);
    if (driven) {
      const CMatrix hf = hamiltonian_drive_Hf(m, t);
      le -= kI * vec(hf * eta - eta * hf);
      ly -= kI * vec(hf * ym - ym * hf);
    }
    const CMatrix z = observed_operator(m, t);
    const CMatrix zt = z - (z * eta).trace() * id;
    const CMatrix ze = zt * eta;
    dy.segment(0, n2) = le;
    dy.segment(n2, n2) = ly + kI * mu * y.segment(n2, n2) + vec(ze + ze.adjoint());
    dy(2 * n2) = ((zt + zt.adjoint()) * ym).trace().real();
    dy(2 * n2 + 1) = std::polar(1.0, mu * t) * ((z + z.adjoint()) * eta).trace().real();
  };

  CVector y = CVector::Zero(2 * n2 + 2);
  y.segment(0, n2) = vec(rho0);
  OdeOptions opt;
  const double fastest = std::abs(mu) + norm_inf(static_l) + 1.0;
  opt.max_step = 0.5 / fastest;
  const CVector end = integrate_dopri5(rhs, 0.0, T, y, opt);
  return {1.0 + 2.0 * end(2 * n2).real() / T, std::norm(end(2 * n2 + 1)) / T};
}

CMatrix static_liouvillian(const ModelSpec& m) {
  ModelSpec s = m;
  for (auto& ch : s.channels) ch.wave = WaveSpec::zero();
  return liouvillian_superop(s, 0.0);
}

SpectrumResult analytic_skeleton(const ModelSpec& m, const CMatrix& rho0,
                                 const std::vector<double>& mu, double T) {
  m.validate();
  require_density_matrix(rho0, m.dim, "initial_state");
  if (!(T > 0.0) || !std::isfinite(T)) throw ArgumentError("spectrum_analytic: T must be positive");
  SpectrumResult out;
  out.mu = mu;
  out.horizon = T;
  out.theta = m.theta;
  out.estimator = EstimatorKind::analytic_finite_T;
  out.inelastic.resize(mu.size());
  out.elastic_curve.resize(mu.size());
  return out;
}

}  // namespace

SpectrumResult spectrum_analytic_serial(const ModelSpec& m, const CMatrix& rho0,
                                        const std::vector<double>& mu, double T) {
  SpectrumResult out = analytic_skeleton(m, rho0, mu, T);
  const CMatrix l0 = static_liouvillian(m);
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const AnalyticPoint p = analytic_point(m, l0, rho0, mu[k], T);
    out.inelastic[k] = p.inelastic;
    out.elastic_curve[k] = p.elastic;
  }
  return out;
}

SpectrumResult spectrum_analytic(const ModelSpec& m, const CMatrix& rho0,
                                 const std::vector<double>& mu, double T, int threads) {
  SpectrumResult out = analytic_skeleton(m, rho0, mu, T);
  const CMatrix l0 = static_liouvillian(m);
  const int nt = threads > 0 ? threads : omp_get_max_threads();
  const long n = static_cast<long>(mu.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
  for (long k = 0; k < n; ++k) {
    try {
      const AnalyticPoint p = analytic_point(m, l0, rho0, mu[static_cast<std::size_t>(k)], T);
      out.inelastic[static_cast<std::size_t>(k)] = p.inelastic;
      out.elastic_curve[static_cast<std::size_t>(k)] = p.elastic;
    } catch (...) {
#pragma omp critical(qtraj_spectrum_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// --- two-level closed forms --------------------------------------------------

CVector s_vector(double theta) {
  CVector s(3);
  s << std::cos(theta), std::sin(theta), 0.0;
  return s;
}

CVector t_vector(const TwoLevelParams& params, double theta) {
  const CVector xe = bloch_equilibrium(params);
  const double x = xe(0).real(), y = xe(1).real(), z = xe(2).real();
  const double c = std::cos(theta), s = std::sin(theta);
  CVector t(3);
  t << (1.0 + z - x * x) * c - x * y * s, (1.0 + z - y * y) * s - x * y * c,
      -(1.0 + z) * (c * x + s * y);
  return t;
}

namespace {

// s . A (A^2 + mu^2)^{-1} t
double resolvent_form(const CMatrix& a, const CVector& s, const CVector& t, double mu) {
  const CMatrix a2 = a * a + mu * mu * CMatrix::Identity(3, 3);
  const CVector r = solve_linear(a2, CVector(a * t));
  return s.dot(r).real();
}

// s(pi/2) . B t(0) - s(0) . B t(pi/2), B = M(mu + v) - M(mu - v), M(w) = (w/2)(A^2 + w^2)^{-1}
double d_form(const CMatrix& a, const CVector& t0, const CVector& t1, double mu, double v) {
  auto m_apply = [&](double w, const CVector& t) -> CVector {
    if (w == 0.0) return CVector::Zero(3);
    const CMatrix a2 = a * a + w * w * CMatrix::Identity(3, 3);
    return 0.5 * w * solve_linear(a2, t);
  };
  const CVector b0 = m_apply(mu + v, t0) - m_apply(mu - v, t0);
  const CVector b1 = m_apply(mu + v, t1) - m_apply(mu - v, t1);
  return s_vector(kPi / 2).dot(b0).real() - s_vector(0.0).dot(b1).real();
}

}  // namespace

double homodyne_inelastic(const TwoLevelParams& params, double theta, double mu) {
  params.validate();
  const CMatrix a = bloch_matrix(params);
  return 1.0 + 2.0 * params.p * params.gamma *
                   resolvent_form(a, s_vector(theta), t_vector(params, theta), mu);
}

SpectrumResult homodyne_spectrum(const TwoLevelParams& params, double theta,
                                 const std::vector<double>& mu) {
  params.validate();
  const CMatrix a = bloch_matrix(params);
  const CVector xe = bloch_equilibrium(params);
  const CVector s = s_vector(theta);
  const CVector t = t_vector(params, theta);
  SpectrumResult out;
  out.mu = mu;
  out.theta = theta;
  out.estimator = EstimatorKind::closed_form_limit;
  const double sx = s.dot(xe).real();
  out.delta_atoms.push_back({0.0, 2.0 * kPi * params.gamma * params.p * sx * sx});
  out.inelastic.reserve(mu.size());
  for (double m : mu) {
    out.inelastic.push_back(1.0 + 2.0 * params.p * params.gamma * resolvent_form(a, s, t, m));
  }
  return out;
}

double heterodyne_D(const TwoLevelParams& params, double mu, double v) {
  params.validate();
  return d_form(bloch_matrix(params), t_vector(params, 0.0), t_vector(params, kPi / 2), mu, v);
}

SpectrumResult heterodyne_spectrum(const TwoLevelParams& params, const std::vector<double>& mu) {
  params.validate();
  const double v = params.nu_lo - params.nu;
  if (v == 0.0) throw ParameterError("model.nu_lo: heterodyne detection needs nu_lo != nu");
  const CMatrix a = bloch_matrix(params);
  const CVector xe = bloch_equilibrium(params);
  const CVector t0 = t_vector(params, 0.0);
  const CVector t1 = t_vector(params, kPi / 2);
  const CVector s0 = s_vector(0.0);
  const CVector s1 = s_vector(kPi / 2);
  const double gp = params.gamma * params.p;
  auto hom = [&](const CVector& s, const CVector& t, double m) {
    return 1.0 + 2.0 * gp * resolvent_form(a, s, t, m);
  };

  SpectrumResult out;
  out.mu = mu;
  out.estimator = EstimatorKind::closed_form_limit;
  const double r2 = std::norm(xe(0)) + std::norm(xe(1));
  const double c = 0.5 * kPi * gp * r2;
  out.delta_atoms.push_back({-std::abs(v), c});
  out.delta_atoms.push_back({std::abs(v), c});
  out.inelastic.reserve(mu.size());
  for (double m : mu) {
    const double four = hom(s0, t0, m - v) + hom(s1, t1, m - v) + hom(s0, t0, m + v) +
                        hom(s1, t1, m + v);
    out.inelastic.push_back(gp * d_form(a, t0, t1, m, v) + 0.25 * four);
  }
  return out;
}

double fluorescence_inelastic(const TwoLevelParams& params, double v) {
  params.validate();
  const CMatrix a = bloch_matrix(params);
  const CVector rhs = t_vector(params, 0.0) - kI * t_vector(params, kPi / 2);
  const CVector r = solve_linear(CMatrix(a + kI * v * CMatrix::Identity(3, 3)), rhs);
  const Complex proj = r(0) + kI * r(1);
  return params.gamma / (4.0 * kPi) * proj.real();
}

std::vector<double> heterodyne_inelastic_from_fluorescence(const TwoLevelParams& params,
                                                           const std::vector<double>& mu) {
  params.validate();
  const double v = params.nu_lo - params.nu;
  std::vector<double> out;
  out.reserve(mu.size());
  for (double m : mu) {
    out.push_back(1.0 + 2.0 * kPi * params.p *
                            (fluorescence_inelastic(params, v + m) +
                             fluorescence_inelastic(params, v - m)));
  }
  return out;
}

FluorescenceSpectrum fluorescence_spectrum(const TwoLevelParams& params,
                                           const std::vector<double>& v) {
  params.validate();
  const CVector xe = bloch_equilibrium(params);
  FluorescenceSpectrum out;
  out.v = v;
  out.elastic_coefficient = params.gamma * (std::norm(xe(0)) + std::norm(xe(1))) / 4.0;
  out.inelastic.reserve(v.size());
  for (double x : v) out.inelastic.push_back(fluorescence_inelastic(params, x));
  return out;
}

PowerSpectrum power_spectrum(const TwoLevelParams& params, const std::vector<double>& nu_lo) {
  params.validate();
  const CVector xe = bloch_equilibrium(params);
  PowerSpectrum out;
  out.nu_lo = nu_lo;
  out.elastic = {0.0, kPi * params.gamma * params.p * (std::norm(xe(0)) + std::norm(xe(1)))};
  out.inelastic.reserve(nu_lo.size());
  for (double lo : nu_lo) {
    out.inelastic.push_back(1.0 + 4.0 * kPi * params.p *
                                      fluorescence_inelastic(params, lo - params.nu));
  }
  return out;
}

// --- bounds ------------------------------------------------------------------

namespace {

BoundsReport assemble_bounds(const std::vector<double>& mu, double theta,
                             const std::vector<double>& s_theta,
                             const std::vector<double>& s_perp) {
  BoundsReport rep;
  rep.mu = mu;
  rep.theta = theta;
  rep.product.resize(mu.size());
  rep.arithmetic_mean.resize(mu.size());
  double min_prod = std::numeric_limits<double>::infinity();
  double min_mean = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < mu.size(); ++k) {
    rep.product[k] = s_theta[k] * s_perp[k];
    rep.arithmetic_mean[k] = 0.5 * (s_theta[k] + s_perp[k]);
    min_prod = std::min(min_prod, rep.product[k]);
    min_mean = std::min(min_mean, rep.arithmetic_mean[k]);
  }
  rep.min_product_margin = mu.empty() ? 0.0 : min_prod - 1.0;
  rep.min_mean_margin = mu.empty() ? 0.0 : min_mean - 1.0;
  return rep;
}

double spread(const std::vector<double>& ref, const std::vector<double>& a,
              const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < ref.size(); ++k) {
    worst = std::max(worst, std::abs(0.5 * (a[k] + b[k]) - ref[k]));
  }
  return worst;
}

}  // namespace

BoundsReport check_uncertainty_bounds(const TwoLevelParams& params, double theta,
                                      const std::vector<double>& mu,
                                      const std::vector<double>& theta_sample) {
  const auto s_theta = homodyne_spectrum(params, theta, mu).inelastic;
  const auto s_perp = homodyne_spectrum(params, theta + kPi / 2, mu).inelastic;
  BoundsReport rep = assemble_bounds(mu, theta, s_theta, s_perp);
  rep.theta_sample = theta_sample;
  for (double th : theta_sample) {
    rep.theta_mean_spread =
        std::max(rep.theta_mean_spread,
                 spread(rep.arithmetic_mean, homodyne_spectrum(params, th, mu).inelastic,
                        homodyne_spectrum(params, th + kPi / 2, mu).inelastic));
  }
  return rep;
}

BoundsReport check_uncertainty_bounds(const ModelSpec& m, const CMatrix& rho0,
                                      const std::vector<double>& mu, double T,
                                      const std::vector<double>& theta_sample, int threads) {
  auto at = [&](double theta) {
    ModelSpec mm = m;
    mm.theta = wrap_phase(theta);
    return spectrum_analytic(mm, rho0, mu, T, threads).inelastic;
  };
  BoundsReport rep = assemble_bounds(mu, m.theta, at(m.theta), at(m.theta + kPi / 2));
  rep.theta_sample = theta_sample;
  for (double th : theta_sample) {
    rep.theta_mean_spread =
        std::max(rep.theta_mean_spread, spread(rep.arithmetic_mean, at(th), at(th + kPi / 2)));
  }
  return rep;
}

std::vector<SweepPoint> random_parameter_sweep(std::size_t n, std::uint64_t seed) {
  std::vector<SweepPoint> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CounterNormal gen(seed, i);
    const auto [u0, u1] = gen.uniforms(0, 0);
    const auto [u2, u3] = gen.uniforms(0, 1);
    const auto [u4, u5] = gen.uniforms(0, 2);
    const auto [u6, u7] = gen.uniforms(0, 3);
    const auto [u8, u9] = gen.uniforms(1, 0);
    SweepPoint sp;
    TwoLevelParams& q = sp.params;
    q.gamma = 0.5 + 1.5 * u0;
    q.Omega = 10.0 * u1;
    q.DeltaNu = -3.0 + 6.0 * u2;
    q.nbar = 0.5 * u3;
    q.kd = u4;
    q.p = 0.05 + 0.9 * u5;
    q.nu = 1.0;
    const double v = 0.2 + 4.8 * u7;
    q.nu_lo = q.nu + (u8 < 0.5 ? -v : v);
    sp.theta = -kPi + 2.0 * kPi * u6;  // u6 in (0, 1] gives theta in (-pi, pi]
    (void)u9;
    out.push_back(sp);
  }
  return out;
}

}  // namespace qtraj
