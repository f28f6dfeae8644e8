// Round-trip and error-location tests for the CSV and JSON codecs.
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/infotheory.hpp"
#include "core/serialize.hpp"
#include "doctest.h"

using namespace ibcurve;

namespace {

JointXY example_joint() {
  Mat p(2, 2);
  p(0, 0) = 0.4;
  p(0, 1) = 0.1;
  p(1, 0) = 0.1;
  p(1, 1) = 0.4;
  return make_joint(std::move(p), {"x0", "x1"}, {"y0", "y1"});
}

JointXY uniform_classes(int num_x, int classes) {
  std::vector<int> f(num_x);
  for (int x = 0; x < num_x; ++x) f[x] = x % classes;
  return joint_from_function(f, std::vector<double>(num_x, 1.0 / num_x),
                             classes);
}

std::filesystem::path scratch_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ibcurve_test_" + name);
}

}  // namespace

TEST_CASE("joint CSV round trip is byte identical") {
  const JointXY joint = example_joint();
  const std::string text = joint_to_csv(joint);
  const JointXY parsed = joint_from_csv(text);
  CHECK(joint_to_csv(parsed) == text);
  CHECK(parsed.x_labels == joint.x_labels);
  CHECK(parsed.y_labels == joint.y_labels);
  CHECK(info::l1_distance(parsed.p, joint.p) == 0.0);
}

TEST_CASE("joint JSON round trip is byte identical") {
  const JointXY joint = uniform_classes(6, 3);
  const std::string text = joint_to_json(joint);
  const JointXY parsed = joint_from_json(text);
  CHECK(joint_to_json(parsed) == text);
  CHECK(info::l1_distance(parsed.p, joint.p) == 0.0);
}

TEST_CASE("joint CSV parse errors carry one-indexed locations") {
  // Bad numeric cell on data row 2 (file row 3), second value column.
  const std::string bad =
      ",y0,y1\n"
      "x0,0.4,0.1\n"
      "x1,0.1,oops\n";
  try {
    joint_from_csv(bad);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 3") != std::string::npos);
    CHECK(what.find("column 3") != std::string::npos);
  }

  CHECK_THROWS_AS(joint_from_csv(""), ParseError);
  CHECK_THROWS_AS(joint_from_csv("y0,y1\n0.5,0.5\n"), ParseError);
  // Wrong field count on a data row.
  CHECK_THROWS_AS(joint_from_csv(",y0,y1\nx0,0.4\n"), ParseError);
}

TEST_CASE("joint JSON parse errors reject malformed documents") {
  CHECK_THROWS_AS(joint_from_json("not json"), ParseError);
  CHECK_THROWS_AS(
      joint_from_json(R"({"x_labels":["a"],"y_labels":["b"],"p":[0.5,0.5]})"),
      ParseError);
  CHECK_THROWS_AS(
      joint_from_json(R"({"x_labels":[1],"y_labels":["b"],"p":[1.0]})"),
      ParseError);
}

TEST_CASE("load and save dispatch on the file extension") {
  const JointXY joint = example_joint();
  const auto csv_path = scratch_file("joint.csv");
  const auto json_path = scratch_file("joint.json");
  save_joint(joint, csv_path.string());
  save_joint(joint, json_path.string());
  const JointXY from_csv_file = load_joint(csv_path.string());
  const JointXY from_json_file = load_joint(json_path.string());
  CHECK(info::l1_distance(from_csv_file.p, joint.p) == 0.0);
  CHECK(info::l1_distance(from_json_file.p, joint.p) == 0.0);
  std::remove(csv_path.string().c_str());
  std::remove(json_path.string().c_str());

  CHECK_THROWS_AS(load_joint("/nonexistent/path/joint.csv"), IoError);
}

TEST_CASE("encoder CSV round trip recovers labels and rows") {
  const JointXY joint = uniform_classes(4, 2);
  const Encoder enc = t_alpha_encoder(0.5, joint);
  const std::string text = encoder_to_csv(enc, joint.x_labels);
  std::vector<std::string> in_labels;
  const Encoder parsed = encoder_from_csv(text, &in_labels);
  CHECK(in_labels == joint.x_labels);
  CHECK(parsed.t_labels == enc.t_labels);
  CHECK(encoder_to_csv(parsed, in_labels) == text);
  CHECK(info::l1_distance(parsed.q, enc.q) == 0.0);
}

TEST_CASE("scan CSV round trip preserves every field") {
  const JointXY joint = uniform_classes(6, 3);
  SolverConfig cfg;
  cfg.restarts = 2;
  cfg.seed = 99;
  const ScanResult scan =
      ::ibcurve::scan(joint, Objective::IbLagrangian, {0.2, 0.8}, cfg, 1);
  const std::string text = scan_to_csv(scan);
  const auto rows = scan_rows_from_csv(text);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].beta == 0.2);
  CHECK(rows[1].beta == 0.8);
  CHECK(scan_rows_to_csv(rows) == text);

  CHECK_THROWS_AS(scan_rows_from_csv("alpha,beta\n1,2\n"), ParseError);
}

TEST_CASE("scan JSON embeds encoders only on request") {
  const JointXY joint = uniform_classes(4, 2);
  SolverConfig cfg;
  cfg.restarts = 2;
  const ScanResult scan =
      ::ibcurve::scan(joint, Objective::Dib, {0.5}, cfg, 1);
  const std::string lean = scan_to_json(scan, false);
  const std::string full = scan_to_json(scan, true);
  CHECK(lean.find("\"encoder\"") == std::string::npos);
  CHECK(full.find("\"encoder\"") != std::string::npos);
  CHECK(lean.find("\"i_xt\"") != std::string::npos);
}

TEST_CASE("bounds CSV sanitizes notes so every line has nine fields") {
  std::vector<BoundReport> reports(1);
  reports[0].theorem = "a4_compression";
  reports[0].epsilon_target = 0.1;
  reports[0].epsilon_actual = 0.1;
  reports[0].y_card = 4;
  reports[0].measured = 0.5;
  reports[0].bound = 0.6;
  reports[0].margin = 0.1;
  reports[0].holds = true;
  reports[0].notes = "window [0.1, 0.9]; inconclusive, kind of\nnext";
  const std::string text = bounds_to_csv(reports);
  size_t line_start = 0;
  int lines = 0;
  while (line_start < text.size()) {
    const size_t line_end = text.find('\n', line_start);
    const std::string line = text.substr(line_start, line_end - line_start);
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    line_start = line_end + 1;
    ++lines;
  }
  CHECK(lines == 2);
  CHECK(text.find("inconclusive; kind of") != std::string::npos);
}

TEST_CASE("analytic tables have the documented shapes") {
  const JointXY joint = uniform_classes(8, 4);
  const Table talpha = talpha_table(joint, 5);
  CHECK(talpha.columns ==
        std::vector<std::string>{"alpha", "i_xt", "i_yt", "h_t"});
  CHECK(talpha.rows == 5);
  CHECK(talpha.at(0, 0) == 0.0);
  CHECK(talpha.at(4, 0) == 1.0);

  const Table envelope = dib_envelope_table(joint, 12);
  CHECK(envelope.columns == std::vector<std::string>{"h_t", "i_yt"});
  CHECK(envelope.rows == 5);

  // One row per partition of the four classes: Bell number B4.
  const Table front = hard_front_table(joint);
  CHECK(front.columns == std::vector<std::string>{"h_t", "i_xt", "i_yt"});
  CHECK(front.rows == 15);

  const JointXY tiny = uniform_classes(3, 3);
  const Table brute = brute_force_table(tiny, 3, 11);
  CHECK(brute.columns == std::vector<std::string>{"i_xt", "i_yt"});
  CHECK(brute.rows >= 2);

  const std::string text = table_to_csv(front);
  CHECK(text.rfind("h_t,i_xt,i_yt\n", 0) == 0);
}

TEST_CASE("significant-digit formatters round trip doubles") {
  const double value = 0.56233514461880829;
  CHECK(format_exact(value) == "0.56233514461880829");
  CHECK(std::stod(format_exact(value)) == value);
  CHECK(format_sig12(value) == "0.562335144619");
  CHECK(format_sig12(0.0) == "0");
}
