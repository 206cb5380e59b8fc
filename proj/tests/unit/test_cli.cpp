// Copyright 2026 The zkls Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(ZKLS_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf;
  size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& s, const std::string& what) {
  return s.find(what) != std::string::npos;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("help and version") {
  auto r = run("--help");
  CHECK(r.code == 0);
  for (const char* sub : {"spectrum", "evans", "simulate", "bifurcate", "replay"}) {
    CHECK(contains(r.out, sub));
  }
  r = run("spectrum --help");
  CHECK(r.code == 0);
  for (const char* flag : {"--config", "--out", "--c", "--L", "--n_max", "--per_mode", "--X", "--N"}) {
    CHECK(contains(r.out, flag));
  }
  r = run("simulate --help");
  for (const char* flag : {"--dt", "--t_end", "--seed", "--init", "--delta", "--diagnostics"}) {
    CHECK(contains(r.out, flag));
  }
  r = run("--version");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "1.0.0"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run("").code == 2);
  CHECK(run("spectrum --bogus 1").code == 2);
  CHECK(run("nosuch").code == 2);
  CHECK(run("replay").code == 2);
  CHECK(run("spectrum --config /nonexistent/zkls.cfg").code == 2);
  const fs::path dir = fs::temp_directory_path() / "zkls_cli_bad";
  auto r = run("evans --c abc --out " + dir.string());
  CHECK(r.code == 2);
  CHECK(contains(r.out, "invalid argument"));
  r = run("evans --c 1 --a 1.5 --lambda 0.1 --out " + dir.string());
  CHECK(r.code == 0);
  fs::remove_all(dir);
}

TEST_CASE("config file with flag override") {
  const fs::path dir = fs::temp_directory_path() / "zkls_cli_cfg";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "# Evans surface\nc = 2\na = 0.25\nlambda = 0.001, 1\nroots = false\n";
  }
  const auto r = run("evans --config " + (dir / "run.cfg").string() + " --c 1 --out " +
                     (dir / "out").string());
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "\"D_small_all_negative\""));
  const std::string manifest = slurp(dir / "out" / "manifest.json");
  CHECK(contains(manifest, "\"c\": \"1\""));
  CHECK(contains(manifest, "\"roots\": \"false\""));
  CHECK(fs::exists(dir / "out" / "evans_surface.csv"));

  const auto rep = run("replay --manifest " + (dir / "out" / "manifest.json").string() +
                       " --out " + (dir / "again").string());
  CHECK(rep.code == 0);
  CHECK(slurp(dir / "out" / "evans_surface.csv") == slurp(dir / "again" / "evans_surface.csv"));
  fs::remove_all(dir);
}
