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

#include "qdce/hilbert.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qdce;
using namespace qdce::testing;

TEST(Hilbert, tensor_ground_with_vacuum) {
  const int n_max = 2;
  const StateVector s = tensor(ket_g(), fock(0, n_max));
  ASSERT_EQ(s.size(), 2 * (n_max + 1));
  EXPECT_EQ(s.dims(), (Dims{2, 3}));
  EXPECT_EQ(s[0], Complex(1.0));
  for (int i = 1; i < s.size(); ++i) EXPECT_EQ(s[i], Complex(0.0));
}

TEST(Hilbert, tensor_is_linear) {
  const double r = 1.0 / std::sqrt(2.0);
  const StateVector s = tensor(StateVector::of({r, Complex(0, r)}), fock(0, 1));
  ASSERT_EQ(s.size(), 4);
  EXPECT_EQ(s[0], Complex(r));
  EXPECT_EQ(s[1], Complex(0.0));
  EXPECT_EQ(s[2], Complex(0, r));
  EXPECT_EQ(s[3], Complex(0.0));
}

TEST(Hilbert, four_ground_states_give_register_origin) {
  const StateVector s = tensor({ket_g(), ket_g(), ket_g(), fock(0, 2)});
  EXPECT_EQ(s.dims(), register_dims(2));
  EXPECT_EQ(s[reg_index(0, 0, 0, 0, 2)], Complex(1.0));
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
}

TEST(Hilbert, tensor_is_associative) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a(random_state(rng, 2), {2});
    const StateVector b(random_state(rng, 3), {3});
    const StateVector c(random_state(rng, 2), {2});
    const StateVector left = tensor(a, tensor(b, c));
    const StateVector right = tensor(tensor(a, b), c);
    EXPECT_EQ(left.dims(), right.dims());
    EXPECT_LE((left.amplitudes() - right.amplitudes()).cwiseAbs().maxCoeff(), 1e-14);

    const Operator oa(random_state(rng, 4).reshaped(2, 2), {2});
    const Operator ob(random_state(rng, 9).reshaped(3, 3), {3});
    const Operator oc(random_state(rng, 4).reshaped(2, 2), {2});
    EXPECT_LE(max_entry_diff(tensor(oa, tensor(ob, oc)).matrix(), tensor(tensor(oa, ob), oc).matrix()), 1e-14);
  }
}

TEST(Hilbert, state_length_must_match_dims) {
  EXPECT_THROW(StateVector(Vector::Zero(5), {2, 3}), DimensionError);
  EXPECT_THROW(Operator(Matrix::Zero(4, 4), {2, 3}), DimensionError);
  EXPECT_THROW(Operator(Matrix::Zero(4, 3), {2, 2}), DimensionError);
}

TEST(Hilbert, embed_identity_is_identity) {
  const Dims dims = register_dims(2);
  for (int target = 0; target < 4; ++target) {
    const Operator id = Operator::identity({dims[target]});
    const Operator full = embed(id, {target}, dims);
    EXPECT_LE(max_entry_diff(full.matrix(), Matrix::Identity(24, 24)), 0.0);
  }
}

TEST(Hilbert, embed_flip_on_a2) {
  const Dims dims = register_dims(2);
  const StateVector origin = tensor({ket_g(), ket_g(), ket_g(), fock(0, 2)});
  const StateVector flipped = embed(pauli_x(), {kA2}, dims) * origin;
  EXPECT_EQ(flipped[reg_index(0, 1, 0, 0, 2)], Complex(1.0));
  EXPECT_NEAR(flipped.norm(), 1.0, 1e-15);
}

TEST(Hilbert, embed_respects_target_order) {
  // A two-subsystem operator given as (Cavity, A1) must act on those slots
  // with its first factor on the cavity.
  const Dims dims = register_dims(1);
  const Operator x_on_first = tensor(Operator(creation(1).matrix() + annihilation(1).matrix(), {2}),
                                     Operator::identity({2}));
  const StateVector origin = tensor({ket_g(), ket_g(), ket_g(), fock(0, 1)});
  const StateVector out = embed(x_on_first, {kCavity, kA1}, dims) * origin;
  EXPECT_NEAR(std::abs(out[reg_index(0, 0, 0, 1, 1)]), 1.0, 1e-15);
}

TEST(Hilbert, embed_rejects_bad_targets) {
  const Dims dims = register_dims(2);
  EXPECT_THROW(embed(pauli_x(), {4}, dims), DimensionError);
  EXPECT_THROW(embed(pauli_x(), {kCavity}, dims), DimensionError);
  const Operator two = tensor(pauli_x(), pauli_x());
  EXPECT_THROW(embed(two, {kA1, kA1}, dims), DimensionError);
  EXPECT_THROW(embed(two, {kA1}, dims), DimensionError);
}

TEST(Hilbert, embed_preserves_unitarity) {
  std::mt19937 rng(5);
  const Dims dims = register_dims(2);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::HouseholderQR<Matrix> qr(random_state(rng, 36).reshaped(6, 6));
    const Operator u(qr.householderQ() * Matrix::Identity(6, 6), {2, 3});
    ASSERT_TRUE(u.is_unitary(1e-12));
    EXPECT_TRUE(embed(u, {kA3, kCavity}, dims).is_unitary(1e-12));
  }
}

TEST(Hilbert, partial_trace_of_product_state_is_pure_factor) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const StateVector a(random_state(rng, 2), {2});
    const StateVector b(random_state(rng, 2), {2});
    const StateVector c(random_state(rng, 2), {2});
    const StateVector d(random_state(rng, 3), {3});
    const StateVector full = tensor({a, b, c, d});

    const DensityMatrix rho = partial_trace(full, {kA2, kA3});
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-12);
    const Vector bc = tensor(b, c).amplitudes();
    EXPECT_LE(max_entry_diff(rho.matrix, bc * bc.adjoint()), 1e-12);

    const DensityMatrix cav = partial_trace(full, {kCavity});
    EXPECT_LE(max_entry_diff(cav.matrix, d.amplitudes() * d.amplitudes().adjoint()), 1e-12);
  }
}

TEST(Hilbert, partial_trace_orders_kept_subsystems_ascending) {
  const StateVector s = tensor({ket_e(), ket_g(), ket_g(), fock(1, 1)});
  const DensityMatrix rho = partial_trace(s, {kCavity, kA1});
  EXPECT_EQ(rho.dims, (Dims{2, 2}));
  // |e>_1 |1>_C -> index 1*2 + 1
  EXPECT_NEAR(rho.matrix(3, 3).real(), 1.0, 1e-15);
}

TEST(Hilbert, partial_trace_of_maximally_entangled_pair_is_maximally_mixed) {
  // cos(pi/4)|p>|g> + sin(pi/4)|w>|e> with <p|w> = 0.
  Eigen::Vector4cd psi;
  const Eigen::Vector2cd p(1.0 / std::sqrt(2.0), Complex(0, -1.0 / std::sqrt(2.0)));
  const Eigen::Vector2cd w(1.0 / std::sqrt(2.0), Complex(0, 1.0 / std::sqrt(2.0)));
  ASSERT_NEAR(std::abs(p.dot(w)), 0.0, 1e-15);
  for (int s = 0; s < 2; ++s) {
    psi(2 * s) = p(s) / std::sqrt(2.0);
    psi(2 * s + 1) = w(s) / std::sqrt(2.0);
  }
  const DensityMatrix rho = partial_trace(StateVector(psi, {2, 2}), {0});
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix);
  EXPECT_NEAR(es.eigenvalues()(0), 0.5, 1e-12);
  EXPECT_NEAR(es.eigenvalues()(1), 0.5, 1e-12);
  EXPECT_NEAR(rho.purity(), 0.5, 1e-12);
}

TEST(Hilbert, fidelity_examples) {
  std::mt19937 rng(3);
  const StateVector psi(random_state(rng, 6), {2, 3});
  EXPECT_NEAR(fidelity_up_to_global_phase(psi, psi), 1.0, 1e-14);
  EXPECT_NEAR(fidelity_up_to_global_phase(psi, psi.scaled(std::polar(1.0, kPi / 4))), 1.0, 1e-14);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(fidelity_up_to_global_phase(ket_g(), StateVector::of({r, r})), 0.5, 1e-15);
  EXPECT_THROW(fidelity_up_to_global_phase(ket_g(), fock(0, 2)), DimensionError);
}

TEST(Hilbert, fidelity_is_phase_invariant_and_symmetric) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const StateVector a(random_state(rng, 4), {2, 2});
    const StateVector b(random_state(rng, 4), {2, 2});
    const double f = fidelity_up_to_global_phase(a, b);
    EXPECT_NEAR(f, fidelity_up_to_global_phase(b, a), 1e-14);
    EXPECT_NEAR(f, fidelity_up_to_global_phase(a.scaled(std::polar(1.0, ang(rng))), b), 1e-14);
    EXPECT_NEAR(f, fidelity_up_to_global_phase(a, b.scaled(std::polar(1.0, ang(rng)))), 1e-14);
    EXPECT_GE(f, 0.0);
    EXPECT_LE(f, 1.0 + 1e-14);
  }
}

TEST(Hilbert, fock_cutoff_round_trip) {
  const StateVector s = tensor({ket_e(), ket_g(), ket_e(), fock(1, 1)});
  const StateVector big = with_fock_cutoff(s, 3);
  EXPECT_EQ(big.dims(), register_dims(3));
  EXPECT_EQ(big[reg_index(1, 0, 1, 1, 3)], Complex(1.0));
  const StateVector back = with_fock_cutoff(big, 1);
  EXPECT_NEAR(fidelity_up_to_global_phase(back, s), 1.0, 1e-15);
  EXPECT_THROW(with_fock_cutoff(tensor({ket_g(), ket_g(), ket_g(), fock(2, 2)}), 1), DimensionError);
}

TEST(Hilbert, two_qubit_density_validation) {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity() / 4.0;
  EXPECT_NO_THROW(TwoQubitDensity{m});
  Eigen::Matrix4cd bad_trace = Eigen::Matrix4cd::Identity() / 2.0;
  EXPECT_THROW(TwoQubitDensity{bad_trace}, InvalidDensityError);
  Eigen::Matrix4cd non_psd = Eigen::Matrix4cd::Zero();
  non_psd(0, 0) = 1.5;
  non_psd(1, 1) = -0.5;
  EXPECT_THROW(TwoQubitDensity{non_psd}, InvalidDensityError);
  Eigen::Matrix4cd non_herm = m;
  non_herm(0, 1) = 0.1;
  EXPECT_THROW(TwoQubitDensity{non_herm}, InvalidDensityError);
}
