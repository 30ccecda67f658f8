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

#include "oracles.hpp"
#include "qtraj/errors.hpp"
#include "qtraj/lindblad.hpp"

using namespace qtraj;

namespace {

std::vector<TwoLevelParams> parameter_grid() {
  std::vector<TwoLevelParams> out{oracle::squeezing_params(), oracle::mollow_params()};
  TwoLevelParams p = oracle::squeezing_params();
  p.nbar = 0.3;
  p.kd = 0.2;
  p.DeltaNu = -2.0;
  p.Omega = 3.0;
  p.gamma = 1.7;
  out.push_back(p);
  return out;
}

}  // namespace

TEST_SUITE("lindblad") {
  TEST_CASE("ground state is stationary without driving") {
    TwoLevelParams p;
    p.p = 0.8;
    const ModelSpec m = build_two_level_model(p, Detection::homodyne);
    CHECK(oracle::max_abs(liouvillian_apply(m, 0.0, pauli::ground())) < 1e-16);
  }

  TEST_CASE("maximally mixed state is annihilated by a unitary generator") {
    ModelSpec m;
    m.dim = 3;
    m.H0 = oracle::random_matrix(3, 5);
    m.H0 = 0.5 * (m.H0 + m.H0.adjoint()).eval();
    m.channels.push_back({CMatrix::Zero(3, 3), WaveSpec::zero()});
    CHECK(oracle::max_abs(liouvillian_apply(m, 0.4, CMatrix::Identity(3, 3) / 3.0)) < 1e-16);
  }

  TEST_CASE("Liouvillian on the excited state matches the symbolic expansion") {
    const TwoLevelParams p = oracle::squeezing_params();
    const ModelSpec m = build_two_level_model(p, Detection::homodyne);
    const CMatrix l = liouvillian_apply(m, 0.0, pauli::excited());
    // total decay gamma; drive H_f(0) = (Omega/2) sigma_x
    CMatrix ref(2, 2);
    ref << -p.gamma, Complex(0.0, p.Omega / 2.0), Complex(0.0, -p.Omega / 2.0), p.gamma;
    CHECK(oracle::max_abs(l - ref) < 1e-12);
  }

  TEST_CASE("Liouvillian output is Hermitian and traceless") {
    const ModelSpec m = build_two_level_model(oracle::mollow_params(), Detection::homodyne);
    const CMatrix l = liouvillian_apply(m, 0.7, oracle::random_density(2, 3));
    CHECK(hermitian_defect(l) < 1e-14);
    CHECK(std::abs(l.trace()) < 1e-14);
    const CMatrix sup = liouvillian_superop(m, 0.7);
    CHECK((sup * vec(oracle::random_density(2, 3)) - vec(l)).norm() < 1e-13);
  }

  TEST_CASE("propagate: identity at s = t and argument check") {
    const ModelSpec m = build_two_level_model(oracle::squeezing_params(), Detection::homodyne);
    const CMatrix r = oracle::random_density(2, 1);
    CHECK(oracle::max_abs(propagate(m, 1.2, 1.2, r) - r) == 0.0);
    CHECK_THROWS_AS(propagate(m, 2.0, 1.0, r), ArgumentError);
  }

  TEST_CASE("spontaneous decay follows exp(-t)") {
    TwoLevelParams p;
    p.gamma = 1.0;
    p.p = 0.8;
    const ModelSpec m = build_two_level_model(p, Detection::homodyne);
    for (double t : {0.5, 1.0, 3.0}) {
      const CMatrix r = propagate(m, 0.0, t, pauli::excited());
      CHECK(std::abs(r(0, 0).real() - std::exp(-t)) < 1e-8);
    }
  }

  TEST_CASE("propagator composition, trace and positivity") {
    for (const auto& p : parameter_grid()) {
      const ModelSpec m = build_two_level_model(p, Detection::homodyne);
      for (std::uint32_t seed = 1; seed <= 3; ++seed) {
        const CMatrix r = oracle::random_density(2, seed);
        const CMatrix direct = propagate(m, 0.2, 2.1, r);
        const CMatrix composed = propagate(m, 0.9, 2.1, propagate(m, 0.2, 0.9, r));
        CHECK(oracle::max_abs(direct - composed) < 1e-8);
        CHECK(std::abs(direct.trace() - 1.0) < 1e-9);
        CHECK(hermitian_defect(direct) < 1e-9);
        CHECK(hermitian_eigenvalues(direct).front() >= -1e-9);
        CHECK(bloch_from_density(direct).norm() <= 1.0 + 1e-9);
      }
      const Propagator u = propagator(m, 0.0, 1.0);
      // vec(I) is a left fixed point: Tr is preserved
      const CVector id = vec(CMatrix::Identity(2, 2));
      CHECK((u.map.adjoint() * id - id).norm() < 1e-10);
    }
  }

  TEST_CASE("Bloch matrix instantiation") {
    TwoLevelParams p;
    p.gamma = 1.0;
    const CMatrix a = bloch_matrix(p);
    CMatrix ref = CMatrix::Zero(3, 3);
    ref(0, 0) = 0.5;
    ref(1, 1) = 0.5;
    ref(2, 2) = 1.0;
    CHECK(oracle::max_abs(a - ref) == 0.0);
    const CMatrix b = bloch_matrix(oracle::mollow_params());
    CHECK(b(0, 0).real() == doctest::Approx(1.91).epsilon(1e-14));
    for (const auto& q : parameter_grid()) {
      const CMatrix s = bloch_matrix(q) + bloch_matrix(q).transpose();
      const double av = q.gamma * (0.5 + q.nbar + 2.0 * q.kd);
      const double cv = q.gamma * (1.0 + 2.0 * q.nbar);
      CMatrix diag = CMatrix::Zero(3, 3);
      diag(0, 0) = 2.0 * av;
      diag(1, 1) = 2.0 * av;
      diag(2, 2) = 2.0 * cv;
      CHECK(oracle::max_abs(s - diag) < 1e-14);
    }
  }

  TEST_CASE("equilibrium Bloch vector") {
    TwoLevelParams p;
    p.gamma = 1.3;
    const CVector x0 = bloch_equilibrium(p);
    CHECK(std::abs(x0(2) + 1.0) < 1e-15);
    p.nbar = 0.4;
    const CVector x1 = bloch_equilibrium(p);
    CHECK(std::abs(x1(2) + 1.0 / 1.8) < 1e-14);
    CHECK(std::abs(x1(0)) < 1e-15);
    const TwoLevelParams q = oracle::squeezing_params();
    const CVector ref = -q.gamma * oracle::adjugate_inverse(bloch_matrix(q)).col(2);
    CHECK((bloch_equilibrium(q) - ref).norm() < 1e-12);
  }

  TEST_CASE("source integral on both sides of the series switch") {
    const CMatrix a = bloch_matrix(oracle::mollow_params());
    auto reference = [&](double tau) {
      // sum_k (-A)^k tau^{k+1} / (k+1)! e_z
      CVector term = CVector::Zero(3);
      term(2) = tau;
      CVector sum = term;
      for (int k = 1; k < 30; ++k) {
        term = (-a * term) * (tau / (k + 1));
        sum += term;
      }
      return sum;
    };
    for (double scale : {0.5e-4, 0.99e-4, 1.01e-4, 1e-3, 0.3}) {
      const double tau = scale / norm_inf(a);
      const CVector ref = reference(tau);
      CHECK((bloch_source_integral(a, tau) - ref).norm() < 1e-10 * ref.norm());
    }
    CHECK(bloch_source_integral(a, 0.0).norm() == 0.0);
  }

  TEST_CASE("rotating-frame propagator equals the Liouvillian propagator") {
    for (const auto& p : parameter_grid()) {
      const ModelSpec m = build_two_level_model(p, Detection::homodyne);
      for (std::uint32_t seed = 1; seed <= 4; ++seed) {
        const CMatrix r = oracle::random_density(2, seed);
        const CMatrix a = rotating_frame_propagate(p, 0.3, 1.7, r);
        const CMatrix b = propagate(m, 0.3, 1.7, r);
        CHECK(oracle::max_abs(a - b) < 1e-7);
      }
      const CMatrix r = oracle::random_density(2, 9);
      CHECK(oracle::max_abs(rotating_frame_propagate(p, 0.8, 0.8, r) - r) < 1e-15);
    }
    CHECK_THROWS_AS(rotating_frame_propagate(oracle::squeezing_params(), 1.0, 0.5, pauli::ground()),
                    ArgumentError);
  }

  TEST_CASE("long-time limit reaches the rotated equilibrium") {
    const TwoLevelParams p = oracle::squeezing_params();
    const CMatrix r = rotating_frame_propagate(p, 0.0, 50.0, pauli::excited());
    CHECK(oracle::max_abs(r - equilibrium_state(p, 50.0)) < 1e-6);
    const ModelSpec m = build_two_level_model(p, Detection::homodyne);
    CHECK(oracle::max_abs(propagate(m, 0.0, 50.0, pauli::excited()) - equilibrium_state(p, 50.0)) <
          1e-6);
  }

  TEST_CASE("Bloch conversions round-trip") {
    const CMatrix r = oracle::random_density(2, 17);
    CHECK(oracle::max_abs(density_from_bloch(bloch_from_density(r)) - r) < 1e-15);
    const BlochState e = bloch_from_density(pauli::excited());
    CHECK(e.z == 1.0);
  }
}
