// Drives the installed CLI binary end to end: exit codes, output files,
// manifest shape, and byte-identical reruns under a fixed seed.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#ifndef IBCURVE_CLI_PATH
#error "IBCURVE_CLI_PATH must point at the CLI binary"
#endif

namespace {

using nlohmann::json;

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(IBCURVE_CLI_PATH) + " " + args +
                              " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buffer[4096];
  while (size_t n = fread(buffer, 1, sizeof(buffer), pipe)) {
    result.output.append(buffer, n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path scratch_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "ibcurve_cli_scratch";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string path_in_scratch(const std::string& name) {
  return (scratch_dir() / name).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (const char c : text) lines += c == '\n';
  return lines;
}

// Uniform deterministic joint with the requested class count, one input per
// class, written as a labeled CSV grid the tool can load.
std::string write_identity_joint(int classes, const std::string& name) {
  std::string text;
  for (int y = 0; y < classes; ++y) text += ",y" + std::to_string(y);
  text += '\n';
  char mass_buf[32];
  std::snprintf(mass_buf, sizeof(mass_buf), "%.17g", 1.0 / classes);
  const std::string mass = mass_buf;
  for (int x = 0; x < classes; ++x) {
    text += "x" + std::to_string(x);
    for (int y = 0; y < classes; ++y) {
      text += ',';
      text += (x == y) ? mass : "0";
    }
    text += '\n';
  }
  const std::string path = path_in_scratch(name);
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
  out.close();
  return path;
}

}  // namespace

TEST_CASE("analytic talpha sweep writes a table and a manifest") {
  const std::string input = write_identity_joint(3, "tri.csv");
  const std::string prefix = path_in_scratch("talpha_out");
  const auto run = run_cli("analytic " + input + " --talpha-grid 5 --out " +
                           prefix);
  CHECK(run.exit_code == 0);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(count_lines(csv) == 6);
  CHECK(csv.rfind("alpha,i_xt,i_yt,h_t\n", 0) == 0);

  const json manifest = json::parse(slurp(prefix + ".manifest.json"));
  CHECK(manifest.at("command") == "analytic");
  CHECK(manifest.at("tool_version") == "0.1.0");
  CHECK(manifest.at("input").at("fingerprint").get<std::string>().size() ==
        16);
}

TEST_CASE("curve scans write csv, json, and manifest") {
  const std::string input = write_identity_joint(3, "tri.csv");
  const std::string prefix = path_in_scratch("curve_out");
  const auto run = run_cli("curve " + input +
                           " --beta-lin 0.2:0.8:3 --restarts 4 --seed 7 "
                           "--out " +
                           prefix);
  CHECK(run.exit_code == 0);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(count_lines(csv) == 4);
  CHECK(csv.rfind("beta,i_xt,i_yt,h_t,objective,iterations,converged,"
                  "restart_index\n",
                  0) == 0);

  const json scan = json::parse(slurp(prefix + ".json"));
  CHECK(scan.at("points").size() == 3);
  const json manifest = json::parse(slurp(prefix + ".manifest.json"));
  CHECK(manifest.at("outputs").size() == 2);
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("params").at("restarts") == 4);
}

TEST_CASE("reruns with the same seed are byte identical") {
  const std::string input = write_identity_joint(3, "tri.csv");
  const std::string prefix_a = path_in_scratch("rerun_a");
  const std::string prefix_b = path_in_scratch("rerun_b");
  const std::string args =
      " --beta-lin 0.2:0.8:3 --restarts 4 --seed 11 --out ";
  CHECK(run_cli("curve " + input + args + prefix_a).exit_code == 0);
  CHECK(run_cli("curve " + input + args + prefix_b).exit_code == 0);
  CHECK(slurp(prefix_a + ".csv") == slurp(prefix_b + ".csv"));
  CHECK(slurp(prefix_a + ".json") == slurp(prefix_b + ".json"));
}

TEST_CASE("bad invocations exit with code one") {
  const std::string prefix = path_in_scratch("bad_out");
  CHECK(run_cli("curve /nonexistent.csv --beta-lin 0.2:0.8:3 --out " +
                prefix)
            .exit_code == 1);
  const std::string input = write_identity_joint(3, "tri.csv");
  CHECK(run_cli("curve " + input +
                " --beta-lin 0.2:0.8:3 --betas 0.5 --out " + prefix)
            .exit_code == 1);
  CHECK(run_cli("curve " + input + " --out " + prefix).exit_code == 1);
  CHECK(run_cli("analytic " + input + " --out " + prefix).exit_code == 1);
}

TEST_CASE("verify prints per-family digests and records the cap bound") {
  const std::string input = write_identity_joint(10, "ten.csv");
  const std::string prefix = path_in_scratch("verify_out");
  const auto run = run_cli("verify " + input +
                           " --theorems issue3 --eps 0.1 --trials 2 "
                           "--seed 5 --out " +
                           prefix);
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("issue3_pe: 2 rows, 0 violations, 0 inconclusive") !=
        std::string::npos);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(count_lines(csv) == 7);
  // Conditional-entropy cap for one tenth of the mass over ten classes.
  CHECK(csv.find("0.460517018599") != std::string::npos);

  const json manifest = json::parse(slurp(prefix + ".manifest.json"));
  CHECK(manifest.at("params").at("theorems") == json::array({"issue3"}));
  CHECK(manifest.at("params").at("trials") == 2);
}

TEST_CASE("demo runs its cross-checked tour on a tiny instance") {
  const std::string prefix = path_in_scratch("demo_out");
  const auto run = run_cli(
      "demo --classes 2 --inputs-per-class 2 --seed 3 --out " + prefix);
  CHECK(run.exit_code == 0);
  CHECK(run.output.find("max i_yt excess over the searched front") !=
        std::string::npos);
  const std::string csv = slurp(prefix + ".csv");
  CHECK(count_lines(csv) == 10);
  const std::string summary = slurp(prefix + "_summary.txt");
  CHECK(summary.find("H(Y) = 0.69314718056 nats") != std::string::npos);

  const std::string prefix_b = path_in_scratch("demo_out_b");
  CHECK(run_cli("demo --classes 2 --inputs-per-class 2 --seed 3 --out " +
                prefix_b)
            .exit_code == 0);
  CHECK(slurp(prefix + ".csv") == slurp(prefix_b + ".csv"));
  CHECK(slurp(prefix + "_summary.txt") == slurp(prefix_b + "_summary.txt"));
}
