// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "core/io.hpp"

namespace zkls {

inline constexpr const char* kVersion = "1.0.0";

// Subcommands: spectrum, evans, simulate, bifurcate, replay. Writes the CSV
// outputs, summary.json and manifest.json into out_dir and returns the summary.
nlohmann::json run_command(const std::string& command, const Config& config,
                           const std::filesystem::path& out_dir);

// Config keys accepted by a subcommand; empty for an unknown name.
std::vector<std::string> command_keys(const std::string& command);

// ZKLS_THREADS, at least 1; defaults to 1.
int worker_count();

// Runs fn(0..count-1) on up to worker_count() threads. Results must be
// written by index; the first exception (lowest index) is rethrown.
void parallel_for(int count, const std::function<void(int)>& fn);

// Parses a torus period. A value that agrees with 2/sqrt(5c) to every digit
// written (at least six decimals) is taken as exactly critical.
double resolve_period(const std::string& text, double c);

}  // namespace zkls
