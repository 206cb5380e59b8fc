// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "zkls/zkls.h"

namespace {

const std::map<std::string, std::string> kHelp = {
    {"c", "soliton speed"},
    {"c0", "critical speed of the branch"},
    {"L", "torus period; a value matching 2/sqrt(5c) to its written digits is critical"},
    {"n_max", "highest transverse mode"},
    {"per_mode", "eigenvalues reported per mode"},
    {"X", "half width of the x domain (default 40/sqrt(c))"},
    {"N", "x collocation points"},
    {"a", "transverse parameters: list a1,a2,... or lo:hi:count"},
    {"lambda", "spectral parameters for the D surface: list or lo:hi:count"},
    {"roots", "also locate the positive root of D (true/false)"},
    {"nx", "x grid points"},
    {"ny", "y grid points"},
    {"dt", "time step"},
    {"t_end", "final time"},
    {"record_every", "steps between ledger records"},
    {"dealias", "2/3 dealiasing (true/false)"},
    {"init", "initial data: soliton, random or unstable"},
    {"delta", "perturbation size"},
    {"seed", "random seed"},
    {"k0", "transverse mode of the unstable data"},
    {"diagnostics", "modulation, monotonicity and virial diagnostics (true/false)"},
    {"R", "monotonicity weight scale"},
    {"x0", "monotonicity weight offset"},
    {"beta", "monotonicity weight drift"},
    {"amplitudes", "branch amplitudes: list or lo:hi:count"},
    {"fit_max", "largest amplitude in the quartic gap fit"},
    {"manifest", "manifest.json of the run to repeat"},
};

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"spectrum", "transverse spectrum and stability verdict"},
    {"evans", "Evans function surface and root table"},
    {"simulate", "nonlinear run with ledger and diagnostics"},
    {"bifurcate", "bifurcation branch at the critical period"},
    {"replay", "repeat a run from its manifest"},
};

std::vector<std::string> split_keys(const std::string& command) {
  size_t needed = 0;
  zkls_command_keys(command.c_str(), nullptr, 0, &needed);
  std::string buf(needed, '\0');
  zkls_command_keys(command.c_str(), buf.data(), buf.size(), &needed);
  buf.resize(needed ? needed - 1 : 0);
  std::vector<std::string> keys;
  std::stringstream ss(buf);
  std::string k;
  while (std::getline(ss, k, ',')) keys.push_back(k);
  return keys;
}

int exit_code(zkls_status s) {
  switch (s) {
    case ZKLS_OK:
      return 0;
    case ZKLS_ERR_INVALID_ARGUMENT:
    case ZKLS_ERR_PRECONDITION:
      return 2;
    case ZKLS_ERR_NUMERICAL:
      return 3;
    default:
      return 1;
  }
}

struct Sub {
  CLI::App* app = nullptr;
  std::map<std::string, std::string> values;
  std::string config_file;
  std::string out_dir;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stability toolkit for line solitons of the Zakharov-Kuznetsov equation"};
  app.set_version_flag("--version", std::string(zkls_version()));
  app.require_subcommand(1);

  std::map<std::string, Sub> subs;
  for (const auto& [name, desc] : kCommands) {
    Sub& s = subs[name];
    s.app = app.add_subcommand(name, desc);
    if (name != "replay") {
      s.app->add_option("--config", s.config_file, "key = value config file ('#' comments)")
          ->check(CLI::ExistingFile);
    }
    s.app->add_option("--out", s.out_dir, "output directory")->default_val("zkls_out/" + name);
    for (const auto& key : split_keys(name)) {
      const auto it = kHelp.find(key);
      s.app->add_option("--" + key, s.values[key], it == kHelp.end() ? key : it->second);
    }
    if (name == "replay") s.app->get_option("--manifest")->required();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    std::string config;
    if (!s.config_file.empty()) {
      std::ifstream in(s.config_file);
      std::stringstream ss;
      ss << in.rdbuf();
      config = ss.str() + "\n";
    }
    for (const auto& [key, value] : s.values) {
      if (s.app->get_option("--" + key)->count() > 0) config += key + " = " + value + "\n";
    }
    size_t needed = 0;
    std::string summary(1 << 20, '\0');
    zkls_status st = zkls_run(name.c_str(), config.c_str(), s.out_dir.c_str(), summary.data(),
                              summary.size(), &needed);
    if (st == ZKLS_ERR_BUFFER_TOO_SMALL) {
      std::cerr << "summary larger than " << summary.size() << " bytes; see "
                << s.out_dir << "/summary.json\n";
      return 0;
    }
    if (st != ZKLS_OK) {
      std::cerr << "zkls " << name << ": " << zkls_status_name(st) << ": " << zkls_last_error()
                << "\n";
      return exit_code(st);
    }
    summary.resize(needed - 1);
    std::cout << summary << "\n";
    return 0;
  }
  return 2;
}
