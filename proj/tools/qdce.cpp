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

// qdce <mode> [--config PATH] [--alpha X | --alpha-grid a:b:n]
//      [--vartheta X | --vartheta-grid a:b:n] [--n-max N] [--epsilon E]
//      [--convention hamiltonian|paper-eq7] [--format csv|json-lines] [--out PATH]

#include "qdce/config.hpp"
#include "qdce/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

int main(int argc, char** argv) {
  CLI::App app{"Cavity-QED quantum delayed-choice simulator"};
  app.set_version_flag("--version", "qdce 1.0.0");

  std::string config_path;
  app.add_option("--config", config_path, "key = value file or JSON object with run settings");

  // Every setting is taken as text so the config validator reports errors
  // the same way for flags and files.
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
    std::string value;
  };
  std::vector<Flag> flags = {
      {"--mode", "mode", "simulate, sweep, checkpoints, compare or fit-phase", {}},
      {"--alpha", "alpha", "ancilla angle (rad)", {}},
      {"--alpha-grid", "alpha_grid", "ancilla angle grid start:stop:count", {}},
      {"--vartheta", "vartheta", "dispersive phase (rad)", {}},
      {"--vartheta-grid", "vartheta_grid", "dispersive phase grid start:stop:count", {}},
      {"--n-max", "n_max", "Fock cutoff", {}},
      {"--epsilon", "epsilon", "white-noise weight in [0, 1]", {}},
      {"--convention", "convention", "Ramsey convention: hamiltonian or paper-eq7", {}},
      {"--format", "output_format", "csv or json-lines", {}},
      {"--out", "output_path", "output file (default: standard output)", {}},
  };
  std::string mode_positional;
  app.add_option("MODE", mode_positional, "simulate, sweep, checkpoints, compare or fit-phase");
  std::vector<CLI::Option*> opts;
  for (auto& f : flags) opts.push_back(app.add_option(f.name, f.value, f.help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qdce::kExitValidation;
  }

  std::string text;
  if (!config_path.empty()) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
      qdce::write_error_record(std::cerr, "io", "cannot read config file '" + config_path + "'");
      return qdce::kExitValidation;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }

  qdce::RawConfig overrides;
  if (!mode_positional.empty()) overrides["mode"] = {mode_positional, "argument <mode>"};
  for (std::size_t i = 0; i < flags.size(); ++i)
    if (opts[i]->count() > 0) overrides[flags[i].key] = {flags[i].value, std::string("flag ") + flags[i].name};

  const qdce::ParseOutcome parsed = qdce::parse_config(text, overrides);
  if (!parsed.ok()) {
    std::string summary = std::to_string(parsed.errors.size()) + " configuration error(s)";
    qdce::write_error_record(std::cerr, "validation", summary, parsed.errors);
    return qdce::kExitValidation;
  }
  return qdce::run(*parsed.config, std::cout, std::cerr);
}
