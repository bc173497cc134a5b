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

// Born-rule statistics on two-qubit states. Outcome S is atom A2 and outcome
// A is atom A3, with g -> 0 and e -> 1; amplitude index is 2*S + A.

#pragma once

#include "qdce/hilbert.hpp"
#include "qdce/ideal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

namespace qdce {

class UndefinedConditionalError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class UndefinedVisibilityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class Branch { particle, wave };  // ancilla A3 found in g / in e

struct PostselectedStats {
  Branch branch = Branch::particle;
  double branch_probability = 0.0;
  std::array<double, 2> conditional{};  // P(S=0 | branch), P(S=1 | branch)
};

struct NoiseParams {
  double epsilon = 0.0;

  explicit NoiseParams(double eps) : epsilon(eps) {
    if (!(eps >= 0.0 && eps <= 1.0))
      throw std::out_of_range("white-noise weight must lie in [0, 1], got " + std::to_string(eps));
  }
};

inline JointDistribution joint_distribution(const Eigen::Vector4cd& psi) {
  return {{std::norm(psi(0)), std::norm(psi(1)), std::norm(psi(2)), std::norm(psi(3))}};
}

inline JointDistribution joint_distribution(const TwoQubitDensity& rho) {
  const auto& m = rho.matrix();
  return {{m(0, 0).real(), m(1, 1).real(), m(2, 2).real(), m(3, 3).real()}};
}

inline PostselectedStats postselect(const JointDistribution& dist, Branch branch) {
  const int a = branch == Branch::particle ? 0 : 1;
  const double p0 = dist[a];      // S = 0
  const double p1 = dist[2 + a];  // S = 1
  const double total = p0 + p1;
  if (total < 1e-12)
    throw UndefinedConditionalError(std::string(branch == Branch::particle ? "particle" : "wave") +
                                    " branch has probability " + std::to_string(total) +
                                    "; conditional statistics are undefined");
  return {branch, total, {p0 / total, p1 / total}};
}

inline PostselectedStats postselect(const Eigen::Vector4cd& psi, Branch branch) {
  return postselect(joint_distribution(psi), branch);
}

/// (max - min) / (max + min) of a sampled curve.
inline double visibility(std::span<const double> curve) {
  if (curve.size() < 3) throw UndefinedVisibilityError("visibility needs at least 3 samples");
  const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
  const double sum = *hi + *lo;
  if (sum == 0.0) throw UndefinedVisibilityError("visibility undefined: max + min = 0");
  return (*hi - *lo) / sum;
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4), where l_i are the
/// decreasing square roots of the eigenvalues of rho (Y x Y) rho* (Y x Y).
///
/// With rho = W W^dagger (W = eigenvectors scaled by sqrt of eigenvalues) the
/// l_i are the singular values of tau = W^T (Y x Y) W. Taking them from an SVD
/// avoids square roots of round-off eigenvalues for rank-deficient rho.
inline double concurrence(const TwoQubitDensity& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.matrix());
  const Eigen::Vector4d weights = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd w = es.eigenvectors() * weights.asDiagonal();
  const Eigen::Matrix4cd tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
  const Eigen::Vector4d l = svd.singularValues();  // already decreasing
  return std::max(0.0, l(0) - l(1) - l(2) - l(3));
}

/// 2 |a00 a11 - a01 a10| for a normalized pure state.
inline double pure_state_concurrence(const Eigen::Vector4cd& psi) {
  return 2.0 * std::abs(psi(0) * psi(3) - psi(1) * psi(2));
}

/// (1 - eps) rho + eps I/4
inline TwoQubitDensity white_noise_mix(const TwoQubitDensity& rho, const NoiseParams& noise) {
  const double eps = noise.epsilon;
  return TwoQubitDensity((1.0 - eps) * rho.matrix() + (eps / 4.0) * Eigen::Matrix4cd::Identity());
}

}  // namespace qdce
