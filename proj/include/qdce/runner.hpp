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

// Drives the protocol, ideal oracle and measurement code for one RunConfig
// and writes plot-ready tables. Output is deterministic: grid points may be
// evaluated on several threads, but rows are always written in grid order.

#pragma once

#include "qdce/config.hpp"
#include "qdce/ideal.hpp"
#include "qdce/measurement.hpp"
#include "qdce/protocol.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

namespace qdce {

enum ExitStatus : int { kExitOk = 0, kExitValidation = 1, kExitNumerical = 2 };

inline constexpr double kRecordSumTolerance = 1e-9;
inline constexpr double kCompareTolerance = 1e-9;

struct SweepRecord {
  double alpha = 0.0;
  double vartheta = 0.0;
  JointDistribution dist;
  double visibility_marginal = 0.0;
  double concurrence = 0.0;
  double cavity_vacuum_population = 0.0;
  double branch_fidelity_vs_ideal = 0.0;  // NaN when the wave branch is empty
};

inline constexpr std::string_view kSweepColumns[] = {
    "alpha", "vartheta", "P00", "P01", "P10", "P11", "visibility_marginal", "concurrence",
    "cavity_vacuum_population", "branch_fidelity_vs_ideal"};

/// One output cell: a real, an integer, a flag or text.
using Cell = std::variant<double, int, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

/// 17 significant digits, lowercase scientific.
inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline void write_table(const Table& t, OutputFormat format, std::ostream& os) {
  if (format == OutputFormat::csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) os << format_real(v);
              else if constexpr (std::is_same_v<T, int>) os << v;
              else if constexpr (std::is_same_v<T, bool>) os << (v ? "true" : "false");
              else os << csv_field(v);
            },
            row[i]);
      }
      os << '\n';
    }
    return;
  }
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    os << obj.dump() << '\n';
  }
}

/// Evaluates fn(i) for i in [0, n) on a few threads; results keep index order.
/// The first failure in index order is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i] = fn(i);
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 8));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& f : failures)
    if (f) std::rethrow_exception(f);
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

inline std::vector<double> reference_vartheta_grid(int count) {
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = 2.0 * std::numbers::pi * k / count;
  return g;
}

}  // namespace detail

/// Phase samples used for marginal visibility: 16 points over one period,
/// which include the extrema of the interference fringe.
inline const std::vector<double>& visibility_vartheta_grid() {
  static const std::vector<double> grid = detail::reference_vartheta_grid(16);
  return grid;
}

/// Phase mapping of the cavity protocol, fitted at alpha = pi/4 (the mapping
/// does not depend on alpha; pi/4 keeps both branches populated).
inline PhaseMapping reference_phase_mapping(int n_max, RamseyConvention convention) {
  ProtocolParams p{std::numbers::pi / 4.0, 0.0, n_max, convention};
  auto grid = detail::reference_vartheta_grid(16);
  grid.push_back(2.0 * std::numbers::pi);
  return fit_phase_mapping(p, grid);
}

inline JointDistribution noisy_distribution(const TwoAtomState& s, double epsilon) {
  return joint_distribution(white_noise_mix(TwoQubitDensity::pure(s.psi), NoiseParams(epsilon)));
}

/// Visibility of P(S = 0) as the dispersive phase runs over one period.
inline double marginal_visibility(double alpha, int n_max, RamseyConvention convention, double epsilon) {
  std::vector<double> curve;
  for (double vt : visibility_vartheta_grid()) {
    const TwoAtomState s = final_two_atom_state(ProtocolParams{alpha, vt, n_max, convention});
    curve.push_back(noisy_distribution(s, epsilon).marginal_s0());
  }
  return visibility(curve);
}

inline SweepRecord simulate_point(double alpha, double vartheta, const RunConfig& cfg, const PhaseMapping& map,
                                  double visibility_marginal) {
  const ProtocolRun run = run_protocol({alpha, vartheta, cfg.n_max, cfg.convention});
  const TwoAtomState s = final_two_atom_state(run);
  const TwoQubitDensity rho = white_noise_mix(TwoQubitDensity::pure(s.psi), NoiseParams(cfg.epsilon));

  SweepRecord r;
  r.alpha = alpha;
  r.vartheta = vartheta;
  r.dist = joint_distribution(rho);
  r.visibility_marginal = visibility_marginal;
  r.concurrence = concurrence(rho);
  r.cavity_vacuum_population = cavity_vacuum_population(run.final_state());
  r.branch_fidelity_vs_ideal = std::numeric_limits<double>::quiet_NaN();
  if (s.wave_weight() > 1e-12)
    r.branch_fidelity_vs_ideal = std::norm(wave_state(map.phi(vartheta)).dot(s.wave_branch()));
  if (std::abs(r.dist.sum() - 1.0) > kRecordSumTolerance)
    throw InvariantViolation("probabilities at alpha=" + detail::fmt_num(alpha) + ", vartheta=" +
                             detail::fmt_num(vartheta) + " sum to " + detail::fmt_num(r.dist.sum()));
  return r;
}

inline Table sweep_table(const std::vector<SweepRecord>& records) {
  Table t{{kSweepColumns, kSweepColumns + std::size(kSweepColumns)}, {}};
  for (const auto& r : records)
    t.rows.push_back({r.alpha, r.vartheta, r.dist[0], r.dist[1], r.dist[2], r.dist[3], r.visibility_marginal,
                      r.concurrence, r.cavity_vacuum_population, r.branch_fidelity_vs_ideal});
  return t;
}

/// Full alpha x vartheta grid, alpha-major.
inline std::vector<SweepRecord> run_sweep(const RunConfig& cfg) {
  const PhaseMapping map = reference_phase_mapping(cfg.n_max, cfg.convention);
  const auto alphas = cfg.alpha_values();
  const auto varthetas = cfg.vartheta_values();
  const auto vis = detail::parallel_map<double>(alphas.size(), [&](std::size_t i) {
    return marginal_visibility(alphas[i], cfg.n_max, cfg.convention, cfg.epsilon);
  });
  return detail::parallel_map<SweepRecord>(alphas.size() * varthetas.size(), [&](std::size_t k) {
    const std::size_t i = k / varthetas.size();
    return simulate_point(alphas[i], varthetas[k % varthetas.size()], cfg, map, vis[i]);
  });
}

inline std::string basis_label(int index, const Dims& dims) {
  const auto digits = detail::digits_of(index, dims);
  std::string s;
  for (std::size_t k = 0; k < digits.size(); ++k) {
    if (k) s += ',';
    s += k + 1 < digits.size() ? (digits[k] ? "e" : "g") : std::to_string(digits[k]);
  }
  return s;
}

inline Table checkpoints_table(const ProtocolRun& run) {
  Table t{{"label", "stage", "index", "basis", "real", "imag"}, {}};
  for (const auto& cp : run.checkpoints) {
    const StateVector& st = cp.state;
    for (int i = 0; i < st.size(); ++i)
      t.rows.push_back({std::string(to_string(cp.label)), cp.stage, i, basis_label(i, st.dims()), st[i].real(),
                        st[i].imag()});
  }
  return t;
}

struct CompareRecord {
  double alpha = 0.0;
  double vartheta = 0.0;
  double phi_fit = 0.0;
  double wave_branch_fidelity = 0.0;  // NaN when the wave branch is empty
  double max_deviation = 0.0;
};

inline std::vector<CompareRecord> run_compare(const RunConfig& cfg) {
  const PhaseMapping map = reference_phase_mapping(cfg.n_max, cfg.convention);
  const auto alphas = cfg.alpha_values();
  const auto varthetas = cfg.vartheta_values();
  return detail::parallel_map<CompareRecord>(alphas.size() * varthetas.size(), [&](std::size_t k) {
    CompareRecord r;
    r.alpha = alphas[k / varthetas.size()];
    r.vartheta = varthetas[k % varthetas.size()];
    r.phi_fit = map.phi(r.vartheta);
    const TwoAtomState s = final_two_atom_state(ProtocolParams{r.alpha, r.vartheta, cfg.n_max, cfg.convention});
    r.max_deviation = joint_distribution(s.psi).max_abs_diff(ideal_joint_distribution({r.alpha, r.phi_fit}));
    r.wave_branch_fidelity = s.wave_weight() > 1e-12 ? std::norm(wave_state(r.phi_fit).dot(s.wave_branch()))
                                                     : std::numeric_limits<double>::quiet_NaN();
    return r;
  });
}

inline Table compare_table(const std::vector<CompareRecord>& records) {
  Table t{{"alpha", "vartheta", "phi_fit", "wave_branch_fidelity", "max_deviation"}, {}};
  for (const auto& r : records)
    t.rows.push_back({r.alpha, r.vartheta, r.phi_fit, r.wave_branch_fidelity, r.max_deviation});
  return t;
}

inline Table phase_table(const PhaseMapping& m, double alpha) {
  return {{"alpha", "points", "slope", "offset", "residual", "affine", "claimed_slope", "claimed_offset",
           "matches_claim"},
          {{alpha, static_cast<int>(m.samples.size()), m.slope, m.offset, m.residual, m.affine(),
            PhaseMapping::kClaimedSlope, PhaseMapping::kClaimedOffset, m.matches_claim()}}};
}

struct RunResult {
  int status = kExitOk;
  Table table;
  std::string error_kind;  // empty on success
  std::string error_message;
};

/// Executes one configured run without touching the filesystem.
inline RunResult execute(const RunConfig& cfg) {
  RunResult res;
  const auto fail = [&](int status, std::string kind, std::string msg) {
    res.status = status;
    res.error_kind = std::move(kind);
    res.error_message = std::move(msg);
  };
  try {
    switch (cfg.mode) {
      case Mode::simulate:
      case Mode::sweep:
        res.table = sweep_table(run_sweep(cfg));
        break;
      case Mode::checkpoints:
        res.table = checkpoints_table(run_protocol({*cfg.alpha, *cfg.vartheta, cfg.n_max, cfg.convention}));
        break;
      case Mode::compare: {
        const auto records = run_compare(cfg);
        res.table = compare_table(records);
        for (const auto& r : records) {
          const bool fid_bad = !std::isnan(r.wave_branch_fidelity) && r.wave_branch_fidelity < 1.0 - kCompareTolerance;
          if (r.max_deviation > kCompareTolerance || fid_bad) {
            fail(kExitNumerical, "numerical-invariant",
                 "simulation departs from the ideal oracle at alpha=" + detail::fmt_num(r.alpha) +
                     ", vartheta=" + detail::fmt_num(r.vartheta));
            break;
          }
        }
        break;
      }
      case Mode::fit_phase: {
        const PhaseMapping m =
            fit_phase_mapping({*cfg.alpha, 0.0, cfg.n_max, cfg.convention}, cfg.vartheta_grid->values());
        res.table = phase_table(m, *cfg.alpha);
        if (!m.affine())
          fail(kExitNumerical, "numerical-invariant",
               "phase mapping is not affine: residual " + detail::fmt_num(m.residual));
        break;
      }
    }
  } catch (const InvariantViolation& e) {
    fail(kExitNumerical, "numerical-invariant", e.what());
  } catch (const std::exception& e) {
    fail(kExitValidation, "validation", e.what());
  }
  return res;
}

inline void write_error_record(std::ostream& err, const std::string& kind, const std::string& message,
                               const std::vector<ConfigError>& details = {}) {
  nlohmann::ordered_json rec;
  rec["error"] = kind;
  rec["message"] = message;
  if (!details.empty()) {
    rec["details"] = nlohmann::json::array();
    for (const auto& d : details)
      rec["details"].push_back({{"key", d.key}, {"source", d.source}, {"message", d.message}});
  }
  err << rec.dump() << '\n';
}

/// Runs `cfg` and writes its table to cfg.output_path (or `out` when empty).
/// Tables are still written when a numerical check fails, so the offending
/// values can be inspected; the error record goes to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  RunResult res = execute(cfg);
  if (res.status == kExitValidation) {
    write_error_record(err, res.error_kind, res.error_message);
    return res.status;
  }
  if (cfg.output_path.empty()) {
    detail::write_table(res.table, cfg.output_format, out);
  } else {
    std::ofstream file(cfg.output_path, std::ios::binary | std::ios::trunc);
    if (!file) {
      write_error_record(err, "io", "cannot open output file '" + cfg.output_path + "'");
      return kExitValidation;
    }
    detail::write_table(res.table, cfg.output_format, file);
  }
  if (res.status != kExitOk) write_error_record(err, res.error_kind, res.error_message);
  return res.status;
}

}  // namespace qdce
