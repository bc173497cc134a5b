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

// Closed-form Mach-Zehnder interferometer with a quantum-controlled second
// beam splitter. No simulation here: these are the analytic reference values.

#pragma once

#include "qdce/hilbert.hpp"

#include <array>
#include <cmath>
#include <numeric>

namespace qdce {

struct IdealParams {
  double alpha = 0.0;  // ancilla angle: cos(alpha)|0> + sin(alpha)|1>
  double phi = 0.0;    // interferometer phase
};

/// P(S, A) over the basis (00, 01, 10, 11), system index first.
struct JointDistribution {
  std::array<double, 4> probs{};

  double operator[](int i) const { return probs[i]; }
  double sum() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
  double marginal_s0() const { return probs[0] + probs[1]; }

  double max_abs_diff(const JointDistribution& other) const {
    double d = 0.0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(probs[i] - other.probs[i]));
    return d;
  }
};

/// (|0> + e^{i phi}|1>) / sqrt(2)
inline Eigen::Vector2cd particle_state(double phi) {
  return Eigen::Vector2cd(1.0, std::polar(1.0, phi)) / std::sqrt(2.0);
}

/// e^{i phi/2} (cos(phi/2)|0> - i sin(phi/2)|1>)
inline Eigen::Vector2cd wave_state(double phi) {
  const Complex global = std::polar(1.0, phi / 2.0);
  return global * Eigen::Vector2cd(std::cos(phi / 2.0), -kI * std::sin(phi / 2.0));
}

inline JointDistribution ideal_joint_distribution(const IdealParams& p) {
  const double c2 = std::cos(p.alpha) * std::cos(p.alpha);
  const double s2 = std::sin(p.alpha) * std::sin(p.alpha);
  const double ch = std::cos(p.phi / 2.0);
  const double sh = std::sin(p.phi / 2.0);
  return {{0.5 * c2, s2 * ch * ch, 0.5 * c2, s2 * sh * sh}};
}

/// cos(alpha)|p>|0> + sin(alpha)|w>|1>, amplitudes indexed 2*S + A.
inline Eigen::Vector4cd ideal_final_state(const IdealParams& p) {
  const Eigen::Vector2cd part = particle_state(p.phi);
  const Eigen::Vector2cd wave = wave_state(p.phi);
  const double c = std::cos(p.alpha);
  const double s = std::sin(p.alpha);
  Eigen::Vector4cd psi;
  for (int sys = 0; sys < 2; ++sys) {
    psi(2 * sys + 0) = c * part(sys);
    psi(2 * sys + 1) = s * wave(sys);
  }
  return psi;
}

}  // namespace qdce
