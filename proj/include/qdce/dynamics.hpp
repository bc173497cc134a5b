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

// Atom-cavity generators (hbar = 1) and the closed-form gates they produce.
// Gates are parameterized by dimensionless pulse areas only.

#pragma once

#include "qdce/hilbert.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdce {

class ConventionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class NonHermitianError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Reduces an angle into [0, 2pi).
inline double reduce_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

/// Resonant coupling g (sigma^- a^dagger + sigma^+ a) on qubit x Fock(n_max + 1).
struct JaynesCummingsGen {
  double g = 1.0;
  int n_max = 2;

  Operator generator() const {
    return Operator(g * (detail::kron(sigma_minus().matrix(), creation(n_max).matrix()) +
                         detail::kron(sigma_plus().matrix(), annihilation(n_max).matrix())),
                    {2, n_max + 1});
  }
};

/// Dispersive shift chi_rate a^dagger a sigma_ee, with chi_rate = g^2 / delta.
struct DispersiveGen {
  double chi_rate = 1.0;
  int n_max = 2;

  Operator generator() const {
    return Operator(chi_rate * detail::kron(sigma_ee().matrix(), number(n_max).matrix()), {2, n_max + 1});
  }
};

/// Classical drive lambda sigma^+ + conj(lambda) sigma^-, lambda = amplitude e^{i chi}.
struct RamseyGen {
  double amplitude = 1.0;
  double chi = 0.0;

  Operator generator() const {
    const Complex lambda = std::polar(amplitude, chi);
    return Operator(lambda * sigma_plus().matrix() + std::conj(lambda) * sigma_minus().matrix(), {2});
  }
};

struct PulseSettings {
  double theta = 0.0;     // Ramsey pulse area
  double chi = 0.0;       // Ramsey phase
  double gt = 0.0;        // resonant pulse area
  double vartheta = 0.0;  // dispersive phase on |e,1>

  PulseSettings canonical() const { return {reduce_angle(theta), chi, reduce_angle(gt), vartheta}; }
};

/// a^dagger a + sigma_ee on qubit x Fock(n_max + 1).
inline Operator excitation_number(int n_max) {
  const Matrix qubit_id = Matrix::Identity(2, 2);
  const Matrix fock_id = Matrix::Identity(n_max + 1, n_max + 1);
  return Operator(detail::kron(sigma_ee().matrix(), fock_id) + detail::kron(qubit_id, number(n_max).matrix()),
                  {2, n_max + 1});
}

/// Resonant evolution exp(-i gt (sigma^- a^dagger + sigma^+ a)) in closed form.
/// Each pair {|e,n>, |g,n+1>} rotates by gt sqrt(n+1); |g,0> and the
/// truncation edge |e,n_max> are left alone.
inline Operator u_on(double gt, int n_max = 2) {
  if (n_max < 1) throw DimensionError("u_on needs n_max >= 1");
  const int nf = n_max + 1;
  const auto idx = [nf](int q, int n) { return q * nf + n; };
  Matrix u = Matrix::Zero(2 * nf, 2 * nf);
  u(idx(0, 0), idx(0, 0)) = 1.0;
  u(idx(1, n_max), idx(1, n_max)) = 1.0;
  for (int n = 0; n < n_max; ++n) {
    const double angle = gt * std::sqrt(static_cast<double>(n + 1));
    const double c = std::cos(angle);
    const Complex mis = -kI * std::sin(angle);
    const int e_n = idx(1, n);
    const int g_n1 = idx(0, n + 1);
    u(e_n, e_n) = c;
    u(g_n1, g_n1) = c;
    u(g_n1, e_n) = mis;
    u(e_n, g_n1) = mis;
  }
  return Operator(std::move(u), {2, nf});
}

/// Controlled phase: |e,n> picks up e^{i n vartheta}, everything else is fixed.
/// vartheta is the signed phase on |e,1>, so the printed sign is kept for
/// either sign of the detuning.
inline Operator u_off(double vartheta, int n_max = 2) {
  if (n_max < 1) throw DimensionError("u_off needs n_max >= 1");
  const int nf = n_max + 1;
  Matrix u = Matrix::Identity(2 * nf, 2 * nf);
  for (int n = 0; n <= n_max; ++n) u(nf + n, nf + n) = std::polar(1.0, n * vartheta);
  return Operator(std::move(u), {2, nf});
}

enum class RamseyConvention { hamiltonian, paper_eq7 };

inline std::string_view to_string(RamseyConvention c) {
  return c == RamseyConvention::hamiltonian ? "hamiltonian" : "paper-eq7";
}

/// The printed single-qubit map, without any unitarity check:
///   |e> -> cos(theta)|e> - i e^{i chi} sin(theta)|g>
///   |g> -> cos(theta)|g> + i e^{i chi} sin(theta)|e>
inline Matrix printed_ramsey_matrix(double theta, double chi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex ph = std::polar(1.0, chi);
  Matrix m(2, 2);
  m(0, 0) = c;
  m(1, 0) = kI * ph * s;
  m(0, 1) = -kI * ph * s;
  m(1, 1) = c;
  return m;
}

/// Ramsey-zone rotation of pulse area theta and phase chi.
///
/// `hamiltonian` is exp(-i theta (e^{i chi} sigma^+ + e^{-i chi} sigma^-)).
/// `paper_eq7` uses the printed map verbatim, which is unitary only when
/// chi = pi/2 (mod pi) or sin(2 theta) = 0; other settings throw ConventionError.
inline Operator ramsey(double theta, double chi, RamseyConvention convention = RamseyConvention::hamiltonian) {
  if (convention == RamseyConvention::paper_eq7) {
    Operator u(printed_ramsey_matrix(theta, chi), {2});
    const double defect = u.unitarity_defect();
    if (defect > 1e-10)
      throw ConventionError("paper-eq7 Ramsey map is not unitary at theta=" + std::to_string(theta) +
                            ", chi=" + std::to_string(chi) + " (defect " + std::to_string(defect) + ")");
    return u;
  }
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix m(2, 2);
  m(0, 0) = c;
  m(1, 0) = -kI * std::polar(1.0, chi) * s;
  m(0, 1) = -kI * std::polar(1.0, -chi) * s;
  m(1, 1) = c;
  return Operator(std::move(m), {2});
}

/// exp(-i G t) for Hermitian G by eigendecomposition. Independent of the
/// closed forms above; used to validate them.
inline Operator expm_oracle(const Operator& generator, double t) {
  const Matrix& g = generator.matrix();
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (generator.hermiticity_defect() > 1e-12 * scale)
    throw NonHermitianError("expm_oracle requires a Hermitian generator");
  const Matrix herm = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(herm);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  Vector phases(lambda.size());
  for (Eigen::Index k = 0; k < lambda.size(); ++k) phases(k) = std::polar(1.0, -lambda(k) * t);
  const Matrix& v = es.eigenvectors();
  return Operator(v * phases.asDiagonal() * v.adjoint(), generator.dims());
}

}  // namespace qdce
