// Copyright 2026 The qdce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdce/dynamics.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qdce;
using namespace qdce::testing;

namespace {

// Index of |q, n> in qubit x Fock(n_max + 1).
int qf(int q, int n, int n_max) { return q * (n_max + 1) + n; }

Vector column(const Operator& u, int q, int n, int n_max) { return u.matrix().col(qf(q, n, n_max)); }

}  // namespace

TEST(Dynamics, generators_are_hermitian) {
  EXPECT_TRUE((JaynesCummingsGen{0.8, 3}.generator().is_hermitian()));
  EXPECT_TRUE((DispersiveGen{-1.3, 3}.generator().is_hermitian()));
  EXPECT_TRUE((RamseyGen{2.0, 0.4}.generator().is_hermitian()));
  EXPECT_NEAR(std::abs(RamseyGen{2.0, 0.4}.generator().matrix().trace()), 0.0, 1e-15);
  const Matrix d = DispersiveGen{0.5, 2}.generator().matrix();
  EXPECT_LE((d - Matrix(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, jaynes_cummings_conserves_excitations) {
  for (int n_max : {1, 2, 4}) {
    const Matrix h = JaynesCummingsGen{1.0, n_max}.generator().matrix();
    const Matrix n = excitation_number(n_max).matrix();
    EXPECT_LE((h * n - n * h).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dynamics, u_on_resonant_swap_table) {
  const int n_max = 2;
  const Operator u = u_on(kPi / 2, n_max);
  const Complex mi(0, -1);
  // |g,0> -> |g,0>
  Vector expect = Vector::Zero(6);
  expect(qf(0, 0, n_max)) = 1.0;
  EXPECT_LE((column(u, 0, 0, n_max) - expect).cwiseAbs().maxCoeff(), 1e-12);
  // |e,0> -> -i|g,1>
  expect.setZero();
  expect(qf(0, 1, n_max)) = mi;
  EXPECT_LE((column(u, 1, 0, n_max) - expect).cwiseAbs().maxCoeff(), 1e-12);
  // |g,1> -> -i|e,0>
  expect.setZero();
  expect(qf(1, 0, n_max)) = mi;
  EXPECT_LE((column(u, 0, 1, n_max) - expect).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Dynamics, u_on_zero_area_is_identity) {
  EXPECT_LE(max_entry_diff(u_on(0.0, 3).matrix(), Matrix::Identity(8, 8)), 0.0);
}

TEST(Dynamics, u_on_quarter_area_matches_block_exponential) {
  // The {|e,0>, |g,1>} block of the generator is sigma_x; exponentiate it alone.
  Matrix block(2, 2);
  block << 0, 1, 1, 0;
  const Matrix ref = taylor_expm(block, kPi / 4);
  const Operator u = u_on(kPi / 4, 2);
  const Vector col = column(u, 1, 0, 2);
  EXPECT_NEAR(std::abs(col(qf(1, 0, 2)) - ref(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(col(qf(0, 1, 2)) - ref(1, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(col(qf(1, 0, 2)) - std::cos(kPi / 4)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(col(qf(0, 1, 2)) - Complex(0, -std::sin(kPi / 4))), 0.0, 1e-14);
}

TEST(Dynamics, u_on_group_property_and_symmetry) {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> area(0.0, 2 * kPi);
  const Matrix n = excitation_number(3).matrix();
  for (int trial = 0; trial < 50; ++trial) {
    const double a = area(rng), b = area(rng);
    EXPECT_LE(max_entry_diff((u_on(a, 3) * u_on(b, 3)).matrix(), u_on(a + b, 3).matrix()), 1e-12);
    const Matrix u = u_on(a, 3).matrix();
    EXPECT_LE((u * n - n * u).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(u_on(a, 3).is_unitary(1e-12));
  }
}

TEST(Dynamics, u_off_phase_table) {
  const int n_max = 2;
  const double vt = kPi / 3;
  const Operator u = u_off(vt, n_max);
  EXPECT_NEAR(std::abs(u.matrix()(qf(1, 1, n_max), qf(1, 1, n_max)) - std::polar(1.0, vt)), 0.0, 1e-15);
  for (auto [q, n] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{0, 0}})
    EXPECT_NEAR(std::abs(u.matrix()(qf(q, n, n_max), qf(q, n, n_max)) - 1.0), 0.0, 1e-15);
  EXPECT_LE(max_entry_diff((u_off(vt, n_max) * u_off(-vt, n_max)).matrix(), Matrix::Identity(6, 6)), 1e-12);
}

TEST(Dynamics, u_off_leaves_ground_row_for_any_phase) {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> ph(-10, 10);
  for (int trial = 0; trial < 20; ++trial) {
    const Operator u = u_off(ph(rng), 3);
    for (int n = 0; n <= 3; ++n) EXPECT_EQ(u.matrix()(qf(0, n, 3), qf(0, n, 3)), Complex(1.0));
  }
}

TEST(Dynamics, ramsey_zero_pulse_is_identity) {
  EXPECT_LE(max_entry_diff(ramsey(0.0, 1.1).matrix(), Matrix::Identity(2, 2)), 0.0);
  EXPECT_LE(max_entry_diff(ramsey(0.0, 1.1, RamseyConvention::paper_eq7).matrix(), Matrix::Identity(2, 2)), 0.0);
}

TEST(Dynamics, ramsey_hamiltonian_half_hadamard_from_ground) {
  // Oracle: Taylor exponential of the drive generator.
  const Matrix ref = taylor_expm(RamseyGen{1.0, kPi / 2}.generator().matrix(), kPi / 4);
  const Vector out = ramsey(kPi / 4, kPi / 2).matrix().col(0);
  EXPECT_LE((out - ref.col(0)).cwiseAbs().maxCoeff(), 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(out(0) - r), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(out(1) - r), 0.0, 1e-14);
}

TEST(Dynamics, printed_ramsey_map_prepares_a1_state) {
  // The printed map at theta = pi/4, chi = 0 sends |g> to (|g> + i|e>)/sqrt2 ...
  const Matrix m = printed_ramsey_matrix(kPi / 4, 0.0);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(m(0, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(m(1, 0) - Complex(0, r)), 0.0, 1e-15);
  // ... but it is not unitary there, so the checked gate refuses it.
  EXPECT_THROW(ramsey(kPi / 4, 0.0, RamseyConvention::paper_eq7), ConventionError);
}

TEST(Dynamics, printed_ramsey_map_is_unitary_only_at_quarter_phase) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> th(0.1, 1.4);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = th(rng);
    EXPECT_NO_THROW(ramsey(theta, kPi / 2, RamseyConvention::paper_eq7));
    EXPECT_NO_THROW(ramsey(theta, 3 * kPi / 2, RamseyConvention::paper_eq7));
    EXPECT_THROW(ramsey(theta, 0.3, RamseyConvention::paper_eq7), ConventionError);
    // Column overlap of the printed map is 2 sin(theta) cos(theta) cos(chi).
    const Matrix m = printed_ramsey_matrix(theta, 0.3);
    EXPECT_NEAR(std::abs(m.col(0).dot(m.col(1))), std::abs(std::sin(2 * theta) * std::cos(0.3)), 1e-14);
  }
  EXPECT_NO_THROW(ramsey(kPi / 2, 0.3, RamseyConvention::paper_eq7));
}

TEST(Dynamics, ramsey_hamiltonian_is_unitary_everywhere) {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> ang(-7, 7);
  for (int trial = 0; trial < 100; ++trial) {
    const Operator u = ramsey(ang(rng), ang(rng));
    EXPECT_TRUE(u.is_unitary(1e-12));
    EXPECT_NEAR(std::abs(u.matrix().determinant()), 1.0, 1e-12);
  }
}

TEST(Dynamics, expm_oracle_zero_generator) {
  const Operator zero(Matrix::Zero(6, 6), {2, 3});
  EXPECT_LE(max_entry_diff(expm_oracle(zero, 3.7).matrix(), Matrix::Identity(6, 6)), 1e-15);
}

TEST(Dynamics, expm_oracle_rejects_non_hermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(expm_oracle(Operator(m, {2}), 1.0), NonHermitianError);
}

TEST(Dynamics, expm_oracle_dispersive_phase_magnitude) {
  const Operator u = expm_oracle(DispersiveGen{1.0, 2}.generator(), 0.7);
  EXPECT_NEAR(std::abs(std::arg(u.matrix()(qf(1, 1, 2), qf(1, 1, 2)))), 0.7, 1e-14);
}

TEST(Dynamics, expm_oracle_agrees_with_taylor_series) {
  std::mt19937 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a = random_state(rng, 64).reshaped(8, 8);
    const Matrix h = a + a.adjoint();
    EXPECT_LE(max_entry_diff(expm_oracle(Operator(h, {8}), 0.9).matrix(), taylor_expm(h, 0.9)), 1e-12);
  }
}

TEST(Dynamics, closed_forms_match_oracle) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const int n_max = 1 + trial % 4;
    const double gt = ang(rng), vt = ang(rng) - kPi, theta = ang(rng), chi = ang(rng);
    EXPECT_LE(max_entry_diff(u_on(gt, n_max).matrix(),
                             expm_oracle(JaynesCummingsGen{1.0, n_max}.generator(), gt).matrix()),
              1e-10);
    // A negative dispersive rate realizes the +vartheta sign on |e,1>.
    EXPECT_LE(max_entry_diff(u_off(vt, n_max).matrix(),
                             expm_oracle(DispersiveGen{-1.0, n_max}.generator(), vt).matrix()),
              1e-10);
    EXPECT_LE(max_entry_diff(ramsey(theta, chi).matrix(), expm_oracle(RamseyGen{1.0, chi}.generator(), theta).matrix()),
              1e-10);
  }
}

TEST(Dynamics, pulse_settings_canonical_reduction) {
  const PulseSettings p = PulseSettings{-kPi / 2, 0.3, 5 * kPi / 2, 1.0}.canonical();
  EXPECT_NEAR(p.theta, 3 * kPi / 2, 1e-14);
  EXPECT_NEAR(p.gt, kPi / 2, 1e-14);
  EXPECT_GE(reduce_angle(-1e-18), 0.0);
  EXPECT_LT(reduce_angle(-1e-18), 2 * kPi);
}
