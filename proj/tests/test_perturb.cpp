// Perturbation sampler invariants and the continuity-bound checks.
#include <cmath>
#include <stdexcept>
#include <vector>

#include "core/bottleneck.hpp"
#include "core/infotheory.hpp"
#include "core/perturb.hpp"
#include "doctest.h"

using namespace ibcurve;

namespace {

JointXY uniform_classes(int num_x, int classes) {
  std::vector<int> f(num_x);
  for (int x = 0; x < num_x; ++x) f[x] = x % classes;
  const std::vector<double> p_x(num_x, 1.0 / num_x);
  return joint_from_function(f, p_x, classes);
}

}  // namespace

TEST_CASE("bound formulas match frozen oracle values") {
  CHECK(bound_cond_entropy(0.01, 4) ==
        doctest::Approx(0.08764053269347763).epsilon(1e-12));
  CHECK(bound_mi_diff(0.01, 4) ==
        doctest::Approx(0.14755517816455743).epsilon(1e-12));
  CHECK(gamma_bound(0.01, 4) ==
        doctest::Approx(0.20746982363563726).epsilon(1e-12));
  CHECK(gamma_bound(0.1, 10) ==
        doctest::Approx(1.8420680743952367).epsilon(1e-12));
  CHECK(gamma_bound(0.02, 10) ==
        doctest::Approx(0.4649798896250934).epsilon(1e-12));
  CHECK(bound_fano_cap(0.1, 10) ==
        doctest::Approx(0.46051701859880917).epsilon(1e-12));
}

TEST_CASE("bound formulas are monotone in epsilon and class count") {
  for (double (*bound)(double, int) :
       {bound_cond_entropy, bound_mi_diff, gamma_bound, bound_fano_cap}) {
    double previous = 0.0;
    for (const double eps : {0.01, 0.05, 0.1, 0.25, 0.45, 0.5}) {
      const double value = bound(eps, 4);
      CHECK(value > previous);
      previous = value;
    }
    CHECK(bound(0.1, 10) > bound(0.1, 2));
  }
}

TEST_CASE("bound formulas reject out-of-domain arguments") {
  CHECK_THROWS_AS(bound_cond_entropy(0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(bound_mi_diff(-0.1, 4), std::invalid_argument);
  CHECK_THROWS_AS(gamma_bound(0.51, 4), std::invalid_argument);
  CHECK_THROWS_AS(bound_fano_cap(0.1, 1), std::invalid_argument);
}

TEST_CASE("perturbation sampler hits the target l1 radius exactly") {
  const JointXY base = uniform_classes(20, 4);
  for (const double eps : {0.005, 0.1, 0.3, 0.5}) {
    const auto sample = perturb_joint(base, eps, 42);
    CHECK(sample.epsilon_actual == doctest::Approx(eps).epsilon(1e-9));
    CHECK(info::l1_distance(base.p, sample.perturbed.p) ==
          doctest::Approx(eps).epsilon(1e-9));
  }
}

TEST_CASE("perturbation preserves the X marginal and row majorities") {
  const JointXY base = uniform_classes(12, 3);
  const auto f = is_deterministic(base);
  REQUIRE(f.has_value());
  const auto sample = perturb_joint(base, 0.5, 7);
  const auto base_px = base.x_marginal();
  const auto pert_px = sample.perturbed.x_marginal();
  for (int x = 0; x < base.num_x(); ++x) {
    CHECK(pert_px[x] == doctest::Approx(base_px[x]).epsilon(1e-12));
    CHECK(sample.perturbed.p(x, (*f)[x]) >= 0.5 * base_px[x] - 1e-12);
  }
}

TEST_CASE("perturbation at epsilon zero returns the base joint") {
  const JointXY base = uniform_classes(6, 3);
  const auto sample = perturb_joint(base, 0.0, 9);
  CHECK(sample.epsilon_actual == 0.0);
  CHECK(info::l1_distance(base.p, sample.perturbed.p) == 0.0);
}

TEST_CASE("perturbation sampler validates its inputs") {
  const JointXY base = uniform_classes(6, 3);
  CHECK_THROWS_AS(perturb_joint(base, 0.51, 1), std::invalid_argument);
  CHECK_THROWS_AS(perturb_joint(base, -0.1, 1), std::invalid_argument);

  Mat mixed(2, 2, 0.25);
  const JointXY soft = make_joint(std::move(mixed));
  CHECK_THROWS_AS(perturb_joint(soft, 0.1, 1), std::invalid_argument);

  const JointXY one_class = uniform_classes(4, 1);
  CHECK_THROWS_AS(perturb_joint(one_class, 0.1, 1), std::invalid_argument);
  CHECK_NOTHROW(perturb_joint(one_class, 0.0, 1));
}

TEST_CASE("perturbation is deterministic in the seed") {
  const JointXY base = uniform_classes(8, 4);
  const auto a = perturb_joint(base, 0.2, 123);
  const auto b = perturb_joint(base, 0.2, 123);
  const auto c = perturb_joint(base, 0.2, 124);
  CHECK(info::l1_distance(a.perturbed.p, b.perturbed.p) == 0.0);
  CHECK(info::l1_distance(a.perturbed.p, c.perturbed.p) > 0.0);
}

TEST_CASE("entropy and information continuity hold through random encoders") {
  const JointXY base = uniform_classes(8, 4);
  Rng rng(0xfeedULL);
  for (const double eps : {0.01, 0.1, 0.45}) {
    const auto sample = perturb_joint(base, eps, rng.next_u64());
    Mat q(8, 3);
    for (int x = 0; x < 8; ++x) rng.fill_simplex(q.row(x));
    const auto [a1, a2] = verify_entropy_mi_bounds(sample, make_encoder(q));
    CHECK(a1.theorem == "a1");
    CHECK(a2.theorem == "a2");
    CHECK(a1.holds);
    CHECK(a2.holds);
    CHECK(a1.margin >= 0.0);
    CHECK(a2.margin >= 0.0);
  }
}

TEST_CASE("curve deviation check passes on a small instance") {
  const JointXY base = uniform_classes(3, 3);
  const auto sample = perturb_joint(base, 0.05, 11);
  const auto report = verify_curve_deviation(sample);
  CHECK(report.theorem == "a3");
  CHECK(report.holds);
}

TEST_CASE("optimizer localization holds on a small instance") {
  const JointXY base = uniform_classes(4, 2);
  const auto sample = perturb_joint(base, 0.05, 13);
  SolverConfig cfg;
  cfg.restarts = 6;
  const auto [compression, prediction] =
      verify_lagrangian_localization(sample, 0.5, cfg);
  CHECK(compression.theorem == "a4_compression");
  CHECK(prediction.theorem == "a4_prediction");
  CHECK(compression.holds);
  CHECK(prediction.holds);

  CHECK_THROWS_AS(verify_lagrangian_localization(sample, 1.0, cfg),
                  std::invalid_argument);
}

TEST_CASE("erasure family stays within gamma of the searched front") {
  const JointXY base = uniform_classes(3, 3);
  const auto sample = perturb_joint(base, 0.05, 17);
  const auto report = verify_erasure_floor(sample, 0.5);
  CHECK(report.theorem == "a5");
  CHECK(report.holds);
  CHECK(report.notes.find("searched front") != std::string::npos);
}

TEST_CASE("fano chain rows: plug-in error is exactly epsilon/2") {
  const JointXY base = uniform_classes(10, 5);
  const auto sample = perturb_joint(base, 0.2, 19);
  const auto rows = verify_fano_chain(sample);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].theorem == "issue3_pe");
  CHECK(rows[0].measured ==
        doctest::Approx(0.5 * sample.epsilon_actual).epsilon(1e-12));
  CHECK(rows[0].holds);
  CHECK(rows[1].theorem == "issue3_fano");
  CHECK(rows[1].holds);
  CHECK(rows[2].theorem == "issue3_cap");
  CHECK(rows[2].measured >= -1e-12);  // data processing
  CHECK(rows[2].holds);
}

TEST_CASE("verification driver shapes and validates its run") {
  const JointXY base = uniform_classes(4, 2);
  VerifyOptions options;
  options.theorems = {"a1", "issue3"};
  options.epsilons = {0.0, 0.1};
  options.trials = 2;
  options.solver.restarts = 2;
  const auto rows = run_verification(base, options);
  CHECK(rows.size() == 2 * 2 * 4);  // (a1 + 3 issue3 rows) per sample
  for (const auto& row : rows) CHECK(row.holds);

  options.theorems = {"a9"};
  CHECK_THROWS_AS(run_verification(base, options), std::invalid_argument);
  options.theorems = {"a1"};
  options.epsilons = {};
  CHECK_THROWS_AS(run_verification(base, options), std::invalid_argument);
  options.epsilons = {0.7};
  CHECK_THROWS_AS(run_verification(base, options), std::invalid_argument);
}
