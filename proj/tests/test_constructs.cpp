// Closed-form constructions for deterministic joints: the erasure family,
// hard clusterings, partition enumeration, and the step envelope.
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/bottleneck.hpp"
#include "core/constructs.hpp"
#include "doctest.h"

using namespace ibcurve;

namespace {

constexpr double kLn2 = 0.69314718055994529;
constexpr double kLn4 = 1.3862943611198906;
constexpr double kLn10 = 2.3025850929940459;

JointXY uniform_classes(int num_x, int classes) {
  std::vector<int> f(num_x);
  for (int x = 0; x < num_x; ++x) f[x] = x % classes;
  const std::vector<double> p_x(num_x, 1.0 / num_x);
  return joint_from_function(f, p_x, classes);
}

}  // namespace

TEST_CASE("erasure encoder hits alpha H(Y) on both axes") {
  const JointXY joint = uniform_classes(20, 10);
  for (const double alpha : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto report = evaluate(joint, t_alpha_encoder(alpha, joint));
    CHECK(report.i_xt == doctest::Approx(alpha * kLn10).epsilon(1e-12));
    CHECK(report.i_yt == doctest::Approx(alpha * kLn10).epsilon(1e-12));
  }
}

TEST_CASE("erasure encoder shape and labels") {
  const JointXY joint = uniform_classes(6, 3);
  const Encoder enc = t_alpha_encoder(0.5, joint);
  CHECK(enc.num_in() == 6);
  CHECK(enc.num_t() == 4);
  CHECK(enc.t_labels.back() == "erased");
  CHECK(enc.q(2, 2) == doctest::Approx(0.5));
  CHECK(enc.q(2, 3) == doctest::Approx(0.5));
}

TEST_CASE("erasure encoder validates its domain") {
  const JointXY joint = uniform_classes(4, 2);
  CHECK_THROWS_AS(t_alpha_encoder(-0.1, joint), std::invalid_argument);
  CHECK_THROWS_AS(t_alpha_encoder(1.1, joint), std::invalid_argument);

  Mat mixed(2, 2, 0.25);
  const JointXY soft = make_joint(std::move(mixed));
  CHECK_THROWS_AS(t_alpha_encoder(0.5, soft), std::invalid_argument);
}

TEST_CASE("copy encoder is the identity on X") {
  const JointXY joint = uniform_classes(5, 5);
  const Encoder enc = t_copy_encoder(joint);
  CHECK(enc.num_in() == 5);
  CHECK(enc.num_t() == 5);
  for (int x = 0; x < 5; ++x) CHECK(enc.q(x, x) == doctest::Approx(1.0));
}

TEST_CASE("deterministic curve is min{r, H(Y)}") {
  CHECK(deterministic_curve(0.3, kLn2) == doctest::Approx(0.3));
  CHECK(deterministic_curve(2.0, kLn2) == doctest::Approx(kLn2));
  CHECK_THROWS_AS(deterministic_curve(-0.1, kLn2), std::invalid_argument);
}

TEST_CASE("clustering normalization produces first-occurrence form") {
  CHECK(normalize_clustering({2, 2, 0}) == HardClustering{0, 0, 1});
  CHECK(normalize_clustering({1, 0, 1, 2}) == HardClustering{0, 1, 0, 2});
}

TEST_CASE("hard clustering encoder routes x through g(f(x))") {
  const JointXY joint = uniform_classes(6, 3);
  const Encoder enc = hard_clustering_encoder({0, 0, 1}, joint);
  CHECK(enc.num_t() == 2);
  CHECK(enc.q(0, 0) == doctest::Approx(1.0));  // f = 0 -> cluster 0
  CHECK(enc.q(1, 0) == doctest::Approx(1.0));  // f = 1 -> cluster 0
  CHECK(enc.q(2, 1) == doctest::Approx(1.0));  // f = 2 -> cluster 1
}

TEST_CASE("partition enumeration counts Bell numbers in canonical order") {
  const auto b3 = enumerate_hard_clusterings(3);
  REQUIRE(b3.size() == 5);
  CHECK(b3.front() == HardClustering{0, 0, 0});
  CHECK(b3.back() == HardClustering{0, 1, 2});

  CHECK(enumerate_hard_clusterings(4).size() == 15);
  CHECK(enumerate_hard_clusterings(1).size() == 1);
}

TEST_CASE("partition enumeration guard") {
  CHECK_THROWS_AS(enumerate_hard_clusterings(13), ResourceLimitError);
  CHECK_THROWS_AS(enumerate_hard_clusterings(0), std::invalid_argument);
}

TEST_CASE("step envelope of the uniform-4 deterministic joint") {
  const JointXY joint = uniform_classes(8, 4);
  const auto envelope = dib_envelope(joint);
  REQUIRE(envelope.size() == 5);
  const double expected[5] = {0.0, 0.56233514461880829, kLn2,
                              1.0397207708399179, kLn4};
  for (int i = 0; i < 5; ++i) {
    CHECK(envelope[i].first == doctest::Approx(expected[i]).epsilon(1e-9));
    CHECK(envelope[i].second ==
          doctest::Approx(envelope[i].first).epsilon(1e-9));
  }
}

TEST_CASE("step envelope needs a deterministic joint") {
  Mat mixed(2, 2, 0.25);
  const JointXY soft = make_joint(std::move(mixed));
  CHECK_THROWS_AS(dib_envelope(soft), std::invalid_argument);
}
