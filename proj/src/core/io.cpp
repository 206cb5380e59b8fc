// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "core/error.hpp"

namespace zkls {
namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + tmp.string());
    out << content;
    out.flush();
    require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

void CsvTable::add(const std::vector<double>& row) {
  require(row.size() == columns_.size(), ErrorKind::InvalidArgument, "csv row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  require(ec == std::errc() && ptr == last, ErrorKind::InvalidArgument,
          "config key '" + key + "': not a number: '" + text + "'");
  return v;
}

}  // namespace

Config Config::parse(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorKind::InvalidArgument,
            "config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    require(!key.empty(), ErrorKind::InvalidArgument,
            "config line " + std::to_string(lineno) + ": empty key");
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) { values_[key] = value; }

bool Config::has(const std::string& key) const { return values_.count(key) != 0; }

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  resolved_[key] = v;
  return v;
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  const double v = it == values_.end() ? fallback : parse_double(key, it->second);
  resolved_[key] = format_double(v);
  return v;
}

int Config::get_int(const std::string& key, int fallback) const {
  const double v = get_double(key, fallback);
  require(v == std::floor(v) && std::abs(v) < 1e9, ErrorKind::InvalidArgument,
          "config key '" + key + "': expected an integer");
  resolved_[key] = std::to_string(static_cast<int>(v));
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const std::string v = get_string(key, fallback ? "true" : "false");
  if (v == "true" || v == "1" || v == "yes") {
    resolved_[key] = "true";
    return true;
  }
  if (v == "false" || v == "0" || v == "no") {
    resolved_[key] = "false";
    return false;
  }
  fail(ErrorKind::InvalidArgument, "config key '" + key + "': expected true or false");
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  std::vector<double> out;
  if (it == values_.end()) {
    out = fallback;
  } else {
    const std::string& text = it->second;
    if (text.find(':') != std::string::npos) {
      std::vector<std::string> parts;
      std::stringstream ss(text);
      std::string part;
      while (std::getline(ss, part, ':')) parts.push_back(trim(part));
      require(parts.size() == 3, ErrorKind::InvalidArgument,
              "config key '" + key + "': range must be lo:hi:count");
      const double lo = parse_double(key, parts[0]);
      const double hi = parse_double(key, parts[1]);
      const double n = parse_double(key, parts[2]);
      require(n >= 1 && n == std::floor(n), ErrorKind::InvalidArgument,
              "config key '" + key + "': range count must be a positive integer");
      const int count = static_cast<int>(n);
      for (int i = 0; i < count; ++i) {
        out.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
      }
    } else {
      std::stringstream ss(text);
      std::string part;
      while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (!part.empty()) out.push_back(parse_double(key, part));
      }
    }
  }
  std::string joined;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) joined += ',';
    joined += format_double(out[i]);
  }
  resolved_[key] = joined;
  return out;
}

void Config::check_known(const std::vector<std::string>& allowed) const {
  std::string unknown;
  for (const auto& [key, value] : values_) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      unknown += (unknown.empty() ? "" : ", ") + key;
    }
  }
  require(unknown.empty(), ErrorKind::InvalidArgument, "unknown config keys: " + unknown);
}

}  // namespace zkls
