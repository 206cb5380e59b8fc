// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace zkls {

// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);
  void add(const std::vector<double>& row);
  std::size_t rows() const noexcept { return rows_.size(); }
  // 17 significant digits, "nan" for non-finite entries.
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

std::string format_double(double v);

// key = value lines; '#' starts a comment. Later keys override earlier ones.
class Config {
 public:
  Config() = default;
  static Config parse(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  // Comma-separated reals, or "lo:hi:count" for an inclusive linear range.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  // Every key read so far with the value actually used.
  const std::map<std::string, std::string>& resolved() const noexcept { return resolved_; }
  // Throws InvalidArgument naming keys outside `allowed`.
  void check_known(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace zkls
