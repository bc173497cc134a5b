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

// Stage-by-stage execution of the cavity delayed-choice circuit:
//
//   C0  |g,g,g,0>
//   C1  Ramsey on A1 -> (|g> + i|e>)/sqrt2, Ramsey on A3 -> cos(a)|g> + sin(a)|e>
//   C2  resonant pi/2 pulse A1 <-> cavity (swap plus phase)
//   C3  dispersive controlled phase A3 -- cavity
//   C4  resonant pi/2 pulse A2 <-> cavity
//   C5  Ramsey Hadamard on A2 (theta = pi/4, chi = pi/2)

#pragma once

#include "qdce/dynamics.hpp"
#include "qdce/hilbert.hpp"
#include "qdce/ideal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qdce {

/// A numerical invariant of the simulation failed; indicates a bug, not physics.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LeakageError : public InvariantViolation {
 public:
  using InvariantViolation::InvariantViolation;
};

class DegenerateBranchError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kLeakageTolerance = 1e-12;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kVacuumTolerance = 1e-9;
inline constexpr double kPurityTolerance = 1e-10;

struct ProtocolParams {
  double alpha = std::numbers::pi / 4.0;
  double vartheta = 0.0;
  int n_max = 2;
  RamseyConvention convention = RamseyConvention::hamiltonian;
};

enum class CheckpointLabel { C0_initial, C1_prepared, C2_after_swap1, C3_after_phase, C4_after_swap2, C5_final };

inline constexpr std::array<CheckpointLabel, 6> kAllCheckpoints = {
    CheckpointLabel::C0_initial,     CheckpointLabel::C1_prepared,    CheckpointLabel::C2_after_swap1,
    CheckpointLabel::C3_after_phase, CheckpointLabel::C4_after_swap2, CheckpointLabel::C5_final};

inline std::string_view to_string(CheckpointLabel l) {
  switch (l) {
    case CheckpointLabel::C0_initial: return "C0_initial";
    case CheckpointLabel::C1_prepared: return "C1_prepared";
    case CheckpointLabel::C2_after_swap1: return "C2_after_swap1";
    case CheckpointLabel::C3_after_phase: return "C3_after_phase";
    case CheckpointLabel::C4_after_swap2: return "C4_after_swap2";
    case CheckpointLabel::C5_final: return "C5_final";
  }
  return "?";
}

struct Checkpoint {
  CheckpointLabel label;
  StateVector state;
  std::string stage;  // gate(s) that produced this state, with their settings
};

struct RamseySetting {
  double theta = 0.0;
  double chi = 0.0;
  RamseyConvention convention = RamseyConvention::hamiltonian;
};

/// Ramsey settings that take |g> to (|g> + i|e>)/sqrt2. The printed map has no
/// unitary setting that reaches this state (its |e> coefficient is real whenever
/// it is unitary), so both conventions use the Hamiltonian rotation here.
inline RamseySetting a1_preparation(RamseyConvention) {
  return {std::numbers::pi / 4.0, std::numbers::pi, RamseyConvention::hamiltonian};
}

/// Ramsey settings that take |g> to cos(alpha)|g> + sin(alpha)|e>.
inline RamseySetting ancilla_preparation(double alpha, RamseyConvention convention) {
  const double chi = convention == RamseyConvention::hamiltonian ? std::numbers::pi / 2.0 : 1.5 * std::numbers::pi;
  return {alpha, chi, convention};
}

inline RamseySetting final_hadamard(RamseyConvention convention) {
  return {std::numbers::pi / 4.0, std::numbers::pi / 2.0, convention};
}

struct ProtocolRun {
  ProtocolParams params;
  double alpha_reduced = 0.0;
  bool alpha_outside_standard_range = false;
  RamseySetting a1_prep, a3_prep, a2_hadamard;
  std::vector<Checkpoint> checkpoints;
  double max_leakage = 0.0;

  const Checkpoint& at(CheckpointLabel label) const {
    return checkpoints.at(static_cast<std::size_t>(label));
  }
  const StateVector& final_state() const { return at(CheckpointLabel::C5_final).state; }
};

namespace detail {

inline std::string fmt_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string describe(std::string_view where, const RamseySetting& s) {
  return "ramsey(" + std::string(where) + ";theta=" + fmt_num(s.theta) + ";chi=" + fmt_num(s.chi) +
         ";convention=" + std::string(to_string(s.convention)) + ")";
}

}  // namespace detail

inline Operator ramsey(const RamseySetting& s) { return ramsey(s.theta, s.chi, s.convention); }

/// Vacuum population of the cavity after tracing out the atoms.
inline double cavity_vacuum_population(const StateVector& state) {
  return 1.0 - fock_population_at_or_above(state, 1);
}

inline ProtocolRun run_protocol(const ProtocolParams& params) {
  if (!std::isfinite(params.alpha) || !std::isfinite(params.vartheta))
    throw std::invalid_argument("alpha and vartheta must be finite");
  const Dims dims = register_dims(params.n_max);
  const double half_pi = std::numbers::pi / 2.0;

  ProtocolRun run;
  run.params = params;
  run.alpha_reduced = reduce_angle(params.alpha);
  run.alpha_outside_standard_range = params.alpha < 0.0 || params.alpha > half_pi;
  run.a1_prep = a1_preparation(params.convention);
  run.a3_prep = ancilla_preparation(run.alpha_reduced, params.convention);
  run.a2_hadamard = final_hadamard(params.convention);

  const auto record = [&](CheckpointLabel label, StateVector state, std::string stage) {
    if (std::abs(state.norm() - 1.0) > kNormTolerance)
      throw InvariantViolation(std::string(to_string(label)) + ": norm drifted to " + detail::fmt_num(state.norm()));
    const double leak = fock_population_at_or_above(state, 2);
    run.max_leakage = std::max(run.max_leakage, leak);
    if (leak > kLeakageTolerance)
      throw LeakageError(std::string(to_string(label)) + ": population " + detail::fmt_num(leak) +
                         " above one photon");
    run.checkpoints.push_back({label, std::move(state), std::move(stage)});
  };

  StateVector psi =
      tensor({ket_g(), ket_g(), ket_g(), fock(0, params.n_max)});
  record(CheckpointLabel::C0_initial, psi, "initial");

  psi = embed(ramsey(run.a1_prep), {kA1}, dims) * (embed(ramsey(run.a3_prep), {kA3}, dims) * psi);
  record(CheckpointLabel::C1_prepared, psi,
         detail::describe("A1", run.a1_prep) + "+" + detail::describe("A3", run.a3_prep));

  psi = embed(u_on(half_pi, params.n_max), {kA1, kCavity}, dims) * psi;
  record(CheckpointLabel::C2_after_swap1, psi, "u_on(A1-C;gt=" + detail::fmt_num(half_pi) + ")");

  psi = embed(u_off(params.vartheta, params.n_max), {kA3, kCavity}, dims) * psi;
  record(CheckpointLabel::C3_after_phase, psi, "u_off(A3-C;vartheta=" + detail::fmt_num(params.vartheta) + ")");

  psi = embed(u_on(half_pi, params.n_max), {kA2, kCavity}, dims) * psi;
  record(CheckpointLabel::C4_after_swap2, psi, "u_on(A2-C;gt=" + detail::fmt_num(half_pi) + ")");

  psi = embed(ramsey(run.a2_hadamard), {kA2}, dims) * psi;
  const double vacuum = cavity_vacuum_population(psi);
  if (vacuum < 1.0 - kVacuumTolerance)
    throw InvariantViolation("C5_final: cavity vacuum population " + detail::fmt_num(vacuum) + " below 1");
  record(CheckpointLabel::C5_final, psi, detail::describe("A2", run.a2_hadamard));
  return run;
}

/// Pure state of atoms A2 (S) and A3 (A) after discarding A1 and the cavity.
struct TwoAtomState {
  Eigen::Vector4cd psi;  // index 2*S + A
  double purity = 1.0;

  double particle_weight() const { return std::norm(psi(0)) + std::norm(psi(2)); }
  double wave_weight() const { return std::norm(psi(1)) + std::norm(psi(3)); }

  /// Normalized A2 state conditioned on A3 = g.
  Eigen::Vector2cd particle_branch() const { return branch(0); }
  /// Normalized A2 state conditioned on A3 = e.
  Eigen::Vector2cd wave_branch() const { return branch(1); }

  /// |<p|w>| between the two normalized branch states.
  double branch_overlap() const { return std::abs(particle_branch().dot(wave_branch())); }

 private:
  Eigen::Vector2cd branch(int a) const {
    Eigen::Vector2cd b(psi(a), psi(2 + a));
    const double n = b.norm();
    if (n < 1e-12) throw DegenerateBranchError(a == 0 ? "particle branch is empty" : "wave branch is empty");
    return b / n;
  }
};

inline TwoAtomState final_two_atom_state(const ProtocolRun& run) {
  const DensityMatrix rho = partial_trace(run.final_state(), {kA2, kA3});
  const double purity = rho.purity();
  if (purity < 1.0 - kPurityTolerance)
    throw InvariantViolation("final A2-A3 state is mixed (purity " + detail::fmt_num(purity) +
                             "); A1 or the cavity is still entangled");
  return {Eigen::Vector4cd(rho.dominant_state().amplitudes()), purity};
}

inline TwoAtomState final_two_atom_state(const ProtocolParams& params) {
  return final_two_atom_state(run_protocol(params));
}

/// Phase phi of a qubit state written as e^{ig}(cos(phi/2)|0> - i sin(phi/2)|1>).
struct WavePhase {
  double phi = 0.0;             // in (-pi, pi]
  double shape_residual = 0.0;  // distance from that one-parameter family
};

inline WavePhase extract_wave_phase(const Eigen::Vector2cd& branch) {
  const Eigen::Vector2cd w = branch / branch.norm();
  const double c = std::abs(w(0));
  if (c < 1e-12) return {std::numbers::pi, 0.0};
  // Rotate away the global phase so the |0> amplitude is real and positive;
  // the |1> amplitude must then be -i times a real number.
  const Complex s = kI * w(1) * std::conj(w(0)) / c;
  return {2.0 * std::atan2(s.real(), c), std::abs(s.imag())};
}

struct PhaseSample {
  double vartheta = 0.0;
  double phi = 0.0;  // unwrapped
  double shape_residual = 0.0;
};

/// Affine fit phi = slope * vartheta + offset of the wave-branch phase.
struct PhaseMapping {
  static constexpr double kClaimedSlope = 0.5;
  static constexpr double kClaimedOffset = std::numbers::pi / 2.0;
  static constexpr double kAffineTolerance = 1e-6;

  double slope = 0.0;
  double offset = 0.0;    // reduced to (-pi, pi]
  double residual = 0.0;  // max deviation from the line, including shape mismatch
  std::vector<PhaseSample> samples;

  bool affine() const { return residual <= kAffineTolerance; }
  double phi(double vartheta) const { return slope * vartheta + offset; }

  bool matches_claim(double tol = kAffineTolerance) const {
    const double d_off = std::remainder(offset - kClaimedOffset, 2.0 * std::numbers::pi);
    return std::abs(slope - kClaimedSlope) <= tol && std::abs(d_off) <= tol;
  }
};

/// Runs the protocol at each vartheta (other fields from `base`) and fits the
/// wave-branch interference phase. Grid spacing must stay below pi so the
/// phase can be unwrapped.
inline PhaseMapping fit_phase_mapping(const ProtocolParams& base, std::vector<double> vartheta_grid) {
  std::sort(vartheta_grid.begin(), vartheta_grid.end());
  vartheta_grid.erase(std::unique(vartheta_grid.begin(), vartheta_grid.end()), vartheta_grid.end());
  if (vartheta_grid.size() < 5) throw std::invalid_argument("phase fit needs at least 5 distinct vartheta values");
  if (std::abs(std::sin(base.alpha)) < 1e-6)
    throw DegenerateBranchError("no wave branch to fit: sin(alpha) = 0");

  PhaseMapping map;
  const double two_pi = 2.0 * std::numbers::pi;
  for (double vt : vartheta_grid) {
    ProtocolParams p = base;
    p.vartheta = vt;
    const WavePhase wp = extract_wave_phase(final_two_atom_state(p).wave_branch());
    double phi = wp.phi;
    if (!map.samples.empty()) phi += two_pi * std::round((map.samples.back().phi - phi) / two_pi);
    map.samples.push_back({vt, phi, wp.shape_residual});
  }

  const double n = static_cast<double>(map.samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : map.samples) {
    sx += s.vartheta;
    sy += s.phi;
    sxx += s.vartheta * s.vartheta;
    sxy += s.vartheta * s.phi;
  }
  map.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double raw_offset = (sy - map.slope * sx) / n;
  for (const auto& s : map.samples)
    map.residual = std::max({map.residual, std::abs(s.phi - (map.slope * s.vartheta + raw_offset)),
                             s.shape_residual});
  map.offset = std::remainder(raw_offset, two_pi);
  if (map.offset <= -std::numbers::pi) map.offset += two_pi;
  return map;
}

}  // namespace qdce
