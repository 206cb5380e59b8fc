// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "core/error.hpp"
#include "core/io.hpp"

using namespace zkls;
namespace fs = std::filesystem;

TEST_CASE("config parsing") {
  const auto cfg = Config::parse(
      "# comment\n"
      "c = 1.5\n"
      "  n = 12   # trailing\n"
      "\n"
      "flag = yes\n"
      "name = soliton\n"
      "c = 2\n");
  CHECK(cfg.get_double("c", 0.0) == 2.0);
  CHECK(cfg.get_int("n", 0) == 12);
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.get_string("name", "") == "soliton");
  CHECK(cfg.get_double("missing", 0.25) == 0.25);
  CHECK(cfg.has("n"));
  CHECK_FALSE(cfg.has("missing"));

  const auto& r = cfg.resolved();
  CHECK(r.at("c") == "2");
  CHECK(r.at("flag") == "true");
  CHECK(r.at("missing") == "0.25");

  CHECK_THROWS_AS(Config::parse("no equals sign\n"), Error);
  CHECK_THROWS_AS(Config::parse(" = 3\n"), Error);
  CHECK_THROWS_AS(Config::parse("c = abc\n").get_double("c", 0.0), Error);
  CHECK_THROWS_AS(Config::parse("c = 1.5x\n").get_double("c", 0.0), Error);
  CHECK_THROWS_AS(Config::parse("n = 1.5\n").get_int("n", 0), Error);
  CHECK_THROWS_AS(Config::parse("b = maybe\n").get_bool("b", false), Error);
}

TEST_CASE("config lists and ranges") {
  const auto cfg = Config::parse("a = 0.1, 0.2 ,0.3\nr = 0:1:5\ns = 2:9:1\nbad = 0:1\n");
  CHECK(cfg.get_list("a", {}) == std::vector<double>{0.1, 0.2, 0.3});
  const auto r = cfg.get_list("r", {});
  REQUIRE(r.size() == 5);
  CHECK(r[0] == 0.0);
  CHECK(r[2] == 0.5);
  CHECK(r[4] == 1.0);
  CHECK(cfg.get_list("s", {}) == std::vector<double>{2.0});
  CHECK(cfg.get_list("none", {7.0}) == std::vector<double>{7.0});
  CHECK(cfg.resolved().at("r") == "0,0.25,0.5,0.75,1");
  CHECK_THROWS_AS(cfg.get_list("bad", {}), Error);
  CHECK_THROWS_AS(Config::parse("r = 0:1:0\n").get_list("r", {}), Error);
}

TEST_CASE("unknown keys") {
  const auto cfg = Config::parse("c = 1\nbogus = 2\n");
  CHECK_NOTHROW(cfg.check_known({"c", "bogus"}));
  try {
    cfg.check_known({"c"});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
    CHECK(std::string(e.what()).find("bogus") != std::string::npos);
  }
}

TEST_CASE("csv formatting") {
  CsvTable t({"x", "y"});
  t.add({1.0, 0.1});
  t.add({std::numeric_limits<double>::quiet_NaN(), -2.5});
  CHECK(t.rows() == 2);
  CHECK(t.str() == "x,y\n1,0.10000000000000001\nnan,-2.5\n");
  CHECK_THROWS_AS(t.add({1.0}), Error);
  // Round trip through 17 digits is exact.
  const double v = std::sqrt(2.0);
  CHECK(std::stod(format_double(v)) == v);
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("atomic write") {
  const fs::path dir = fs::temp_directory_path() / "zkls_io_test";
  fs::remove_all(dir);
  const fs::path file = dir / "sub" / "out.txt";
  write_atomic(file, "first\n");
  CHECK(read_file(file) == "first\n");
  write_atomic(file, "second\n");
  CHECK(read_file(file) == "second\n");
  int entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(file.parent_path())) ++entries;
  CHECK(entries == 1);
  CHECK_THROWS_AS(read_file(dir / "missing"), Error);
  fs::remove_all(dir);
}
