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

// Run configuration for the qdce batch front end.
//
// Accepted inputs, later sources overriding earlier ones key by key:
//   * a key-value file: one `key = value` per line, `#` starts a comment;
//   * a single JSON object document with the same keys;
//   * command-line flags (`--alpha-grid` for key `alpha_grid`, and so on).
//
// Angles are radians. Grids are written `start:stop:count` (JSON also takes
// `[start, stop, count]`) and include both endpoints.

#pragma once

#include "qdce/dynamics.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace qdce {

enum class Mode { simulate, sweep, checkpoints, compare, fit_phase };
enum class OutputFormat { csv, json_lines };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::simulate: return "simulate";
    case Mode::sweep: return "sweep";
    case Mode::checkpoints: return "checkpoints";
    case Mode::compare: return "compare";
    case Mode::fit_phase: return "fit-phase";
  }
  return "?";
}

struct Grid {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;

  std::vector<double> values() const {
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i)
      v[i] = i == count - 1 ? stop : start + (stop - start) * static_cast<double>(i) / (count - 1);
    return v;
  }
};

struct RunConfig {
  Mode mode = Mode::simulate;
  std::optional<double> alpha;
  std::optional<Grid> alpha_grid;
  std::optional<double> vartheta;
  std::optional<Grid> vartheta_grid;
  int n_max = 2;
  double epsilon = 0.0;
  RamseyConvention convention = RamseyConvention::hamiltonian;
  std::string output_path;  // empty: standard output
  OutputFormat output_format = OutputFormat::csv;

  std::vector<double> alpha_values() const { return alpha_grid ? alpha_grid->values() : std::vector{*alpha}; }
  std::vector<double> vartheta_values() const {
    return vartheta_grid ? vartheta_grid->values() : std::vector{*vartheta};
  }
};

struct ConfigError {
  std::string key;
  std::string source;  // "line 3", "flag --alpha", "JSON key 'alpha'"
  std::string message;

  std::string to_string() const {
    return source.empty() ? key + ": " + message : source + ": " + key + ": " + message;
  }
};

/// One raw `key -> value` assignment with where it came from.
struct RawEntry {
  std::string value;
  std::string source;
};
using RawConfig = std::map<std::string, RawEntry>;

struct ParseOutcome {
  std::optional<RunConfig> config;
  std::vector<ConfigError> errors;

  bool ok() const { return config.has_value(); }
};

inline constexpr std::string_view kConfigKeys[] = {"mode",     "alpha",   "alpha_grid", "vartheta",
                                                   "vartheta_grid", "n_max", "epsilon", "convention",
                                                   "output_path",   "output_format"};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool known_key(std::string_view key) {
  for (auto k : kConfigKeys)
    if (k == key) return true;
  return false;
}

inline std::string json_scalar_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
  return buf;
}

inline void read_json_document(std::string_view text, RawConfig& raw, std::vector<ConfigError>& errors) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    errors.push_back({"<document>", "JSON", std::string("malformed JSON: ") + e.what()});
    return;
  }
  if (!doc.is_object()) {
    errors.push_back({"<document>", "JSON", "structured config must be a single object"});
    return;
  }
  for (const auto& [key, v] : doc.items()) {
    const std::string source = "JSON key '" + key + "'";
    if (!known_key(key)) {
      errors.push_back({key, source, "unknown key"});
      continue;
    }
    if (v.is_string() || v.is_number()) {
      raw[key] = {json_scalar_text(v), source};
    } else if (v.is_array() && v.size() == 3 && v[0].is_number() && v[1].is_number() && v[2].is_number()) {
      raw[key] = {json_scalar_text(v[0]) + ":" + json_scalar_text(v[1]) + ":" + json_scalar_text(v[2]), source};
    } else {
      errors.push_back({key, source, "type mismatch: expected a number, string or [start, stop, count]"});
    }
  }
}

inline void read_key_values(std::string_view text, RawConfig& raw, std::vector<ConfigError>& errors) {
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string source = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back({std::string(line), source, "expected `key = value`"});
      continue;
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known_key(key)) {
      errors.push_back({key, source, "unknown key"});
      continue;
    }
    if (raw.contains(key)) {
      errors.push_back({key, source, "duplicate key (first set at " + raw[key].source + ")"});
      continue;
    }
    raw[key] = {value, source};
  }
}

class Validator {
 public:
  explicit Validator(std::vector<ConfigError>& errors) : errors_(errors) {}

  std::optional<double> real(const std::string& key, const RawEntry& e) {
    const std::string_view s = trim(e.value);
    if (s.starts_with("deg:")) {
      fail(key, e, "angles are accepted in radians only; the 'deg:' prefix is not supported");
      return std::nullopt;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(key, e, "type mismatch: '" + e.value + "' is not a real number");
      return std::nullopt;
    }
    if (!std::isfinite(v)) {
      fail(key, e, "value must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const std::string& key, const RawEntry& e) {
    const std::string_view s = trim(e.value);
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
      fail(key, e, "type mismatch: '" + e.value + "' is not an integer");
      return std::nullopt;
    }
    return v;
  }

  std::optional<Grid> grid(const std::string& key, const RawEntry& e) {
    const std::string& s = e.value;
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos) {
      fail(key, e, "type mismatch: grid must be written start:stop:count");
      return std::nullopt;
    }
    const auto start = real(key, {s.substr(0, c1), e.source});
    const auto stop = real(key, {s.substr(c1 + 1, c2 - c1 - 1), e.source});
    const auto count = integer(key, {s.substr(c2 + 1), e.source});
    if (!start || !stop || !count) return std::nullopt;
    bool good = true;
    if (*count < 2) good = fail(key, e, "grid count must be >= 2");
    if (!(*start < *stop)) good = fail(key, e, "grid start must be < stop");
    if (!good) return std::nullopt;
    return Grid{*start, *stop, *count};
  }

  bool fail(const std::string& key, const RawEntry& e, std::string message) {
    errors_.push_back({key, e.source, std::move(message)});
    return false;
  }

 private:
  std::vector<ConfigError>& errors_;
};

}  // namespace detail

/// Splits config text into raw assignments. A document whose first
/// non-blank character is `{` is read as JSON, anything else as key-value lines.
inline RawConfig read_raw_config(std::string_view text, std::vector<ConfigError>& errors) {
  RawConfig raw;
  const std::string_view t = detail::trim(text);
  if (t.starts_with("{"))
    detail::read_json_document(t, raw, errors);
  else
    detail::read_key_values(text, raw, errors);
  return raw;
}

/// Validates merged raw entries into a RunConfig, collecting every error.
inline ParseOutcome validate_config(const RawConfig& raw) {
  ParseOutcome out;
  auto& errors = out.errors;
  detail::Validator val(errors);
  RunConfig cfg;

  const auto get = [&](const char* key) -> const RawEntry* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  std::optional<Mode> mode;
  if (const auto* e = get("mode")) {
    const std::string& v = e->value;
    if (v == "simulate") mode = Mode::simulate;
    else if (v == "sweep") mode = Mode::sweep;
    else if (v == "checkpoints") mode = Mode::checkpoints;
    else if (v == "compare") mode = Mode::compare;
    else if (v == "fit-phase" || v == "fit_phase") mode = Mode::fit_phase;
    else val.fail("mode", *e, "unknown mode '" + v + "' (simulate, sweep, checkpoints, compare, fit-phase)");
  } else {
    errors.push_back({"mode", "", "missing required field"});
  }

  if (const auto* e = get("alpha")) cfg.alpha = val.real("alpha", *e);
  if (const auto* e = get("vartheta")) cfg.vartheta = val.real("vartheta", *e);
  if (const auto* e = get("alpha_grid")) cfg.alpha_grid = val.grid("alpha_grid", *e);
  if (const auto* e = get("vartheta_grid")) cfg.vartheta_grid = val.grid("vartheta_grid", *e);
  if (const auto* e = get("n_max")) {
    if (const auto n = val.integer("n_max", *e)) {
      if (*n < 1) val.fail("n_max", *e, "Fock cutoff must be >= 1");
      else cfg.n_max = *n;
    }
  }
  if (const auto* e = get("epsilon")) {
    if (const auto eps = val.real("epsilon", *e)) {
      if (*eps < 0.0 || *eps > 1.0) val.fail("epsilon", *e, "white-noise weight must lie in [0, 1]");
      else cfg.epsilon = *eps;
    }
  }
  if (const auto* e = get("convention")) {
    if (e->value == "hamiltonian") cfg.convention = RamseyConvention::hamiltonian;
    else if (e->value == "paper-eq7" || e->value == "paper_eq7") cfg.convention = RamseyConvention::paper_eq7;
    else val.fail("convention", *e, "expected hamiltonian or paper-eq7");
  }
  if (const auto* e = get("output_format")) {
    if (e->value == "csv") cfg.output_format = OutputFormat::csv;
    else if (e->value == "json-lines" || e->value == "json_lines") cfg.output_format = OutputFormat::json_lines;
    else val.fail("output_format", *e, "expected csv or json-lines");
  }
  if (const auto* e = get("output_path")) cfg.output_path = e->value;

  if (mode) {
    cfg.mode = *mode;
    // Which angle fields each mode takes; epsilon only where statistics are emitted.
    struct Shape {
      bool alpha_single, alpha_grid, vartheta_single, vartheta_grid, epsilon;
    };
    Shape shape{};
    switch (*mode) {
      case Mode::simulate: shape = {true, false, true, false, true}; break;
      case Mode::checkpoints: shape = {true, false, true, false, false}; break;
      case Mode::sweep: shape = {true, true, true, true, true}; break;
      case Mode::compare: shape = {true, true, true, true, false}; break;
      case Mode::fit_phase: shape = {true, false, false, true, false}; break;
    }
    const std::string m(to_string(*mode));
    const auto forbid = [&](const char* key, bool allowed) {
      if (const auto* e = get(key); e && !allowed) val.fail(key, *e, "not used by mode '" + m + "'");
    };
    forbid("alpha", shape.alpha_single);
    forbid("alpha_grid", shape.alpha_grid);
    forbid("vartheta", shape.vartheta_single);
    forbid("vartheta_grid", shape.vartheta_grid);
    forbid("epsilon", shape.epsilon);

    const auto need_one = [&](const char* single, const char* grid, bool grid_ok) {
      const bool has_single = get(single) != nullptr;
      const bool has_grid = get(grid) != nullptr;
      if (has_single && has_grid)
        errors.push_back({std::string(single), get(grid)->source,
                          std::string("give either ") + single + " or " + grid + ", not both"});
      else if (!has_single && !has_grid)
        errors.push_back({std::string(single), "",
                          "missing required field" + (grid_ok ? std::string(" (or ") + grid + ")" : std::string())});
    };
    if (*mode == Mode::fit_phase) {
      if (!get("vartheta_grid")) errors.push_back({"vartheta_grid", "", "missing required field"});
      if (cfg.vartheta_grid && cfg.vartheta_grid->count < 5)
        val.fail("vartheta_grid", *get("vartheta_grid"), "phase fit needs at least 5 points");
      if (!get("alpha")) cfg.alpha = std::numbers::pi / 4.0;
      if (cfg.alpha && std::abs(std::sin(*cfg.alpha)) < 1e-6)
        val.fail("alpha", *get("alpha"), "sin(alpha) = 0 leaves no wave branch to fit");
    } else {
      need_one("alpha", "alpha_grid", shape.alpha_grid);
      need_one("vartheta", "vartheta_grid", shape.vartheta_grid);
    }
  }

  if (errors.empty()) out.config = cfg;
  return out;
}

/// Parses config text, then applies `overrides` (typically command-line flags).
inline ParseOutcome parse_config(std::string_view text, const RawConfig& overrides = {}) {
  std::vector<ConfigError> read_errors;
  RawConfig raw = read_raw_config(text, read_errors);
  for (const auto& [k, v] : overrides) {
    if (!detail::known_key(k)) {
      read_errors.push_back({k, v.source, "unknown key"});
      continue;
    }
    raw[k] = v;
  }
  ParseOutcome out = validate_config(raw);
  if (!read_errors.empty()) {
    out.errors.insert(out.errors.begin(), read_errors.begin(), read_errors.end());
    out.config.reset();
  }
  return out;
}

}  // namespace qdce
